// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gamsom/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gamsom/errors.hpp"
#include "gamsom/hash.hpp"

namespace gamsom {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Strips a trailing # comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quotes = !in_quotes;
    if (line[i] == '#' && !in_quotes) return line.substr(0, i);
  }
  return line;
}

struct RawValue {
  std::string text;
  int lineno = 0;

  std::string as_string() const {
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
      return text.substr(1, text.size() - 2);
    }
    return text;
  }
  double as_double() const {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || !trim(end).empty()) {
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected a number, got \"" + text + "\"");
    }
    return v;
  }
  long long as_int() const {
    const double v = as_double();
    const auto i = static_cast<long long>(v);
    if (static_cast<double>(i) != v) {
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected an integer, got \"" + text + "\"");
    }
    return i;
  }
};

}  // namespace

PipelineConfig parse_config(const std::string& text, const PipelineConfig& base) {
  PipelineConfig cfg = base;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("config line " + std::to_string(lineno) +
                         ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "extract" && section != "som" && section != "synth" &&
          section != "run" && section != "output") {
        throw ParseError("config line " + std::to_string(lineno) +
                         ": unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const RawValue value{trim(line.substr(eq + 1)), lineno};
    const std::string qualified = section.empty() ? key : section + "." + key;

    if (qualified == "extract.tuning_axis") {
      cfg.tuning_axis = tuning_axis_from_string(value.as_string());
    } else if (qualified == "extract.jobs") {
      cfg.jobs = static_cast<int>(value.as_int());
    } else if (qualified == "extract.frame_len") {
      if (value.as_int() != static_cast<long long>(kFrameLen)) {
        throw InvalidParams("frame_len is fixed at " + std::to_string(kFrameLen));
      }
    } else if (qualified == "extract.hop") {
      if (value.as_int() != static_cast<long long>(kHop)) {
        throw InvalidParams("hop is fixed at " + std::to_string(kHop));
      }
    } else if (qualified == "extract.window") {
      if (value.as_string() != "hann") {
        throw InvalidParams("window is fixed to hann");
      }
    } else if (qualified == "som.width") {
      cfg.som.width = static_cast<std::size_t>(value.as_int());
    } else if (qualified == "som.height") {
      cfg.som.height = static_cast<std::size_t>(value.as_int());
    } else if (qualified == "som.epochs") {
      cfg.som.epochs = static_cast<std::size_t>(value.as_int());
    } else if (qualified == "som.lr_start") {
      cfg.som.lr_start = value.as_double();
    } else if (qualified == "som.lr_end") {
      cfg.som.lr_end = value.as_double();
    } else if (qualified == "som.radius_start") {
      cfg.som.radius_start = value.as_double();
    } else if (qualified == "som.radius_end") {
      cfg.som.radius_end = value.as_double();
    } else if (qualified == "run.seed") {
      cfg.seed = static_cast<std::uint64_t>(value.as_int());
    } else if (qualified == "synth.corpus_name") {
      cfg.synth.corpus_name = value.as_string();
    } else if (qualified == "synth.ensembles") {
      cfg.synth.n_ensembles = static_cast<std::size_t>(value.as_int());
    } else if (qualified == "synth.pieces_per_ensemble") {
      cfg.synth.pieces_per_ensemble = static_cast<std::size_t>(value.as_int());
    } else if (qualified == "synth.region_assignment") {
      cfg.synth.region_assignment =
          region_assignment_from_string(value.as_string());
    } else if (qualified == "synth.duration_s") {
      cfg.synth.duration_s = value.as_double();
    } else if (qualified == "synth.duration_large_form_s") {
      cfg.synth.duration_large_form_s = value.as_double();
    } else if (qualified == "synth.note_rate_hz") {
      cfg.synth.note_rate_hz = value.as_double();
    } else if (qualified == "synth.voices") {
      cfg.synth.voices = static_cast<int>(value.as_int());
    } else if (qualified == "output.dir") {
      cfg.out_dir = value.as_string();
    } else {
      throw ParseError("config line " + std::to_string(lineno) + ": unknown key \"" +
                       qualified + "\"");
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path,
                           const PipelineConfig& base) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

std::string effective_config_json(const PipelineConfig& config) {
  ordered_json j;
  j["extract"] = {
      {"frame_len", kFrameLen},
      {"hop", kHop},
      {"window", "hann"},
      {"tuning_axis", to_string(config.tuning_axis)},
      {"f_lo_hz", kTuningLoHz},
      {"f_hi_hz", kTuningHiHz},
      {"jobs", config.jobs},
  };
  j["som"] = {
      {"width", config.som.width},
      {"height", config.som.height},
      {"epochs", config.som.epochs},
      {"lr_start", config.som.lr_start},
      {"lr_end", config.som.lr_end},
      {"radius_start", config.som.radius_start},
      {"radius_end", config.som.radius_end},
  };
  j["run"] = {{"seed", config.seed}};
  j["synth"] = {
      {"corpus_name", config.synth.corpus_name},
      {"ensembles", config.synth.n_ensembles},
      {"pieces_per_ensemble", config.synth.pieces_per_ensemble},
      {"region_assignment", to_string(config.synth.region_assignment)},
      {"duration_s", config.synth.duration_s},
      {"duration_large_form_s", config.synth.duration_large_form_s},
      {"note_rate_hz", config.synth.note_rate_hz},
      {"voices", config.synth.voices},
  };
  j["output"] = {{"dir", config.out_dir}};
  return j.dump();
}

std::string config_hash(const PipelineConfig& config) {
  return hash_hex(effective_config_json(config));
}

}  // namespace gamsom
