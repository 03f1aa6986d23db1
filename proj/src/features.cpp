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

#include "gamsom/features.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gamsom/errors.hpp"
#include "timbre_accumulator.hpp"
#include "tuning_accumulator.hpp"

namespace gamsom {

using ordered_json = nlohmann::ordered_json;

RecordFeatures extract_features(const AudioClip& clip, TuningAxis axis) {
  const double bin_hz = static_cast<double>(clip.sample_rate) / kFrameLen;
  const double frame_rate =
      static_cast<double>(clip.sample_rate) / static_cast<double>(kHop);

  detail::TuningAccumulator tuning_acc(bin_hz, kFrameLen / 2 + 1);
  detail::TimbreAccumulator timbre_acc(frame_rate);
  std::size_t n_frames = 0;
  for_each_frame_spectrum(clip, [&](std::size_t, const MagnitudeSpectrum& spec) {
    tuning_acc.add(spec);
    timbre_acc.add(spec);
    ++n_frames;
  });

  RecordFeatures rec;
  rec.id = clip.source_id;
  rec.sample_rate = clip.sample_rate;
  rec.n_frames = n_frames;
  rec.frame_rate = frame_rate;
  rec.tuning = tuning_acc.finish(axis, clip.source_id);

  const TimbreTrajectory traj = timbre_acc.finish(clip.source_id);
  rec.articulation = articulation_vector(traj);
  const TrajectorySpectrum ts = trajectory_spectrum(traj);
  rec.form.peak_hz = ts.peak_hz;
  rec.form.centroid_hz = ts.centroid_hz;
  return rec;
}

const RecordFeatures* FeatureFile::find(const std::string& id) const {
  for (const auto& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::string feature_file_to_json(const FeatureFile& file) {
  ordered_json j;
  j["schema"] = "gamsom.features/1";
  j["provenance"] = {
      {"config_hash", file.config_hash},
      {"manifest_hash", file.manifest_hash},
      {"seed", file.seed},
  };
  j["corpus_name"] = file.corpus_name;
  j["params"] = {
      {"frame_len", kFrameLen},
      {"hop", kHop},
      {"window", "hann"},
      {"tuning_axis", to_string(file.tuning_axis)},
      {"f_lo_hz", kTuningLoHz},
      {"f_hi_hz", kTuningHiHz},
  };

  ordered_json records = ordered_json::object();
  for (const auto& r : file.records) {
    ordered_json jr;
    jr["sample_rate"] = r.sample_rate;
    jr["n_frames"] = r.n_frames;
    jr["frame_rate"] = r.frame_rate;
    jr["tuning"] = {
        {"axis", to_string(r.tuning.axis)},
        {"bin_hz", r.tuning.bin_hz},
        {"first_bin", r.tuning.first_bin},
        {"values", r.tuning.values},
    };
    jr["articulation"] = {
        {"centroid_std", r.articulation.centroid_std},
        {"spread_std", r.articulation.spread_std},
        {"sharpness_mean", r.articulation.sharpness_mean},
    };
    ordered_json form;
    form["peak_hz"] = r.form.peak_hz ? ordered_json(*r.form.peak_hz) : ordered_json();
    form["centroid_hz"] =
        r.form.centroid_hz ? ordered_json(*r.form.centroid_hz) : ordered_json();
    jr["form"] = std::move(form);
    records[r.id] = std::move(jr);
  }
  j["records"] = std::move(records);

  ordered_json errors = ordered_json::array();
  for (const auto& e : file.errors) {
    errors.push_back({{"id", e.id}, {"error", e.message}});
  }
  j["errors"] = std::move(errors);
  return j.dump(2) + "\n";
}

FeatureFile feature_file_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("feature file is not valid JSON: ") + e.what());
  }

  FeatureFile file;
  try {
    if (j.at("schema").get<std::string>() != "gamsom.features/1") {
      throw ParseError("unknown feature file schema");
    }
    const auto& prov = j.at("provenance");
    file.config_hash = prov.at("config_hash").get<std::string>();
    file.manifest_hash = prov.at("manifest_hash").get<std::string>();
    file.seed = prov.at("seed").get<std::uint64_t>();
    file.corpus_name = j.at("corpus_name").get<std::string>();
    file.tuning_axis =
        tuning_axis_from_string(j.at("params").at("tuning_axis").get<std::string>());

    for (const auto& [id, jr] : j.at("records").items()) {
      RecordFeatures r;
      r.id = id;
      r.sample_rate = jr.at("sample_rate").get<int>();
      r.n_frames = jr.at("n_frames").get<std::size_t>();
      r.frame_rate = jr.at("frame_rate").get<double>();
      const auto& jt = jr.at("tuning");
      r.tuning.axis = tuning_axis_from_string(jt.at("axis").get<std::string>());
      r.tuning.bin_hz = jt.at("bin_hz").get<double>();
      r.tuning.first_bin = jt.at("first_bin").get<std::size_t>();
      r.tuning.values = jt.at("values").get<std::vector<double>>();
      r.tuning.source_id = id;
      const auto& ja = jr.at("articulation");
      r.articulation.centroid_std = ja.at("centroid_std").get<double>();
      r.articulation.spread_std = ja.at("spread_std").get<double>();
      r.articulation.sharpness_mean = ja.at("sharpness_mean").get<double>();
      r.articulation.source_id = id;
      const auto& jf = jr.at("form");
      if (!jf.at("peak_hz").is_null()) {
        r.form.peak_hz = jf.at("peak_hz").get<double>();
      }
      if (!jf.at("centroid_hz").is_null()) {
        r.form.centroid_hz = jf.at("centroid_hz").get<double>();
      }
      file.records.push_back(std::move(r));
    }
    for (const auto& je : j.at("errors")) {
      file.errors.push_back(
          {je.at("id").get<std::string>(), je.at("error").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("feature file schema error: ") + e.what());
  }
  return file;
}

void save_feature_file(const FeatureFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write feature file: " + path.string());
  }
  out << feature_file_to_json(file);
  if (!out) {
    throw IoError("feature file write failed: " + path.string());
  }
}

FeatureFile load_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open feature file: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return feature_file_from_json(ss.str());
}

}  // namespace gamsom
