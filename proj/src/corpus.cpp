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

#include "gamsom/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gamsom/errors.hpp"
#include "gamsom/wav.hpp"

namespace gamsom {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Region region) {
  return region == Region::Indonesian ? "Indonesian" : "Western";
}

Region region_from_string(const std::string& s) {
  if (s == "Indonesian") return Region::Indonesian;
  if (s == "Western") return Region::Western;
  throw ValidationError("unknown region \"" + s +
                        "\" (must be Indonesian or Western)");
}

const RecordingEntry* CorpusManifest::find(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest: " + path.string());
  }
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest is not valid JSON: " + path.string() + ": " + e.what());
  }

  CorpusManifest m;
  try {
    m.corpus_name = j.at("corpus_name").get<std::string>();
    const auto& entries = j.at("entries");
    if (!entries.is_array()) throw ParseError("manifest entries must be an array");
    for (const auto& je : entries) {
      RecordingEntry e;
      e.id = je.at("id").get<std::string>();
      e.path = je.at("path").get<std::string>();
      e.title = je.at("title").get<std::string>();
      e.ensemble = je.at("ensemble").get<std::string>();
      e.region = region_from_string(je.at("region").get<std::string>());
      m.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest schema error: " + path.string() + ": " + e.what());
  }

  if (m.entries.empty()) {
    throw ValidationError("manifest has no entries: " + path.string());
  }
  std::set<std::string> seen;
  const auto base = std::filesystem::absolute(path).parent_path();
  for (auto& e : m.entries) {
    if (!seen.insert(e.id).second) {
      throw ValidationError("duplicate recording id \"" + e.id + "\" in manifest");
    }
    std::filesystem::path p(e.path);
    e.resolved_path = p.is_absolute() ? p : base / p;
    if (!std::filesystem::exists(e.resolved_path)) {
      throw ValidationError("audio path not resolvable for id \"" + e.id +
                            "\": " + e.resolved_path.string());
    }
  }
  return m;
}

void save_manifest(const CorpusManifest& manifest,
                   const std::filesystem::path& path,
                   const std::string& provenance_json) {
  ordered_json j;
  j["corpus_name"] = manifest.corpus_name;
  if (!provenance_json.empty()) {
    j["provenance"] = ordered_json::parse(provenance_json);
  }
  j["entries"] = ordered_json::array();
  for (const auto& e : manifest.entries) {
    ordered_json je;
    je["id"] = e.id;
    je["path"] = e.path;
    je["title"] = e.title;
    je["ensemble"] = e.ensemble;
    je["region"] = to_string(e.region);
    j["entries"].push_back(std::move(je));
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write manifest: " + path.string());
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw IoError("manifest write failed: " + path.string());
  }
}

AudioClip decode_audio(const RecordingEntry& entry) {
  const auto& p = entry.resolved_path.empty() ? std::filesystem::path(entry.path)
                                              : entry.resolved_path;
  const WavContent wav = read_wav(p);

  AudioClip clip;
  clip.sample_rate = wav.sample_rate;
  clip.source_id = entry.id;
  const std::size_t n = wav.frame_count();
  clip.samples.resize(n);
  if (wav.channels == 1) {
    clip.samples.assign(wav.samples.begin(), wav.samples.end());
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      clip.samples[i] = 0.5 * (wav.samples[2 * i] + wav.samples[2 * i + 1]);
    }
  }
  return clip;
}

void encode_audio(const AudioClip& clip, const std::filesystem::path& path) {
  write_wav_f32_mono(path, clip.samples, clip.sample_rate);
}

}  // namespace gamsom
