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

#include "gamsom/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gamsom/errors.hpp"
#include "gamsom/hash.hpp"

namespace gamsom {

using ordered_json = nlohmann::ordered_json;

FeatureFile extract_corpus(const CorpusManifest& manifest,
                           const std::filesystem::path& manifest_path,
                           const PipelineConfig& config) {
  FeatureFile file;
  file.corpus_name = manifest.corpus_name;
  file.tuning_axis = config.tuning_axis;
  file.config_hash = config_hash(config);
  file.manifest_hash = hash_file(manifest_path);
  file.seed = config.seed;

  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<RecordFeatures>> results(n);
  std::vector<std::string> failures(n);

  unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                  : std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(n));

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        const AudioClip clip = decode_audio(manifest.entries[i]);
        results[i] = extract_features(clip, config.tuning_axis);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Output is assembled in manifest order regardless of completion order.
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i]) {
      file.records.push_back(std::move(*results[i]));
    } else {
      file.errors.push_back({manifest.entries[i].id, failures[i]});
    }
  }
  return file;
}

SomModel train_from_file(const std::filesystem::path& features_path,
                         FeatureMode mode, const PipelineConfig& config,
                         bool allow_constant) {
  const FeatureFile file = load_feature_file(features_path);
  const FeatureMatrix matrix = build_feature_matrix(file, mode, allow_constant);
  SomModel model = train_som(matrix, config.som, config.seed);
  model.mode = mode;
  model.features_hash = hash_file(features_path);
  model.config_hash = config_hash(config);
  return model;
}

namespace {

std::vector<double> row_for_mode(const SomModel& model, const RecordFeatures& rec) {
  if (model.mode == FeatureMode::Tuning) {
    if (rec.tuning.values.size() != model.dim) {
      throw DimMismatch("tuning vector of \"" + rec.id + "\" has " +
                        std::to_string(rec.tuning.values.size()) +
                        " dims, model expects " + std::to_string(model.dim));
    }
    return rec.tuning.values;
  }
  const std::vector<double> raw = {rec.articulation.centroid_std,
                                   rec.articulation.spread_std,
                                   rec.articulation.sharpness_mean};
  return normalize_row(model, raw);
}

}  // namespace

std::string placements_file_to_json(const PlacementsFile& file) {
  ordered_json j;
  j["schema"] = "gamsom.placements/1";
  j["provenance"] = {
      {"model_hash", file.model_hash},
      {"features_hash", file.features_hash},
      {"manifest_hash", file.manifest_hash},
  };
  j["grid"] = {{"width", file.width}, {"height", file.height}};
  j["placements"] = ordered_json::array();
  for (const auto& p : file.placements) {
    j["placements"].push_back({{"id", p.recording_id},
                               {"x", p.x},
                               {"y", p.y},
                               {"bmu_distance", p.bmu_distance}});
  }
  return j.dump(2) + "\n";
}

PlacementsFile placements_file_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("placements file is not valid JSON: ") + e.what());
  }
  PlacementsFile file;
  try {
    if (j.at("schema").get<std::string>() != "gamsom.placements/1") {
      throw ParseError("unknown placements file schema");
    }
    const auto& prov = j.at("provenance");
    file.model_hash = prov.at("model_hash").get<std::string>();
    file.features_hash = prov.at("features_hash").get<std::string>();
    file.manifest_hash = prov.at("manifest_hash").get<std::string>();
    file.width = j.at("grid").at("width").get<std::size_t>();
    file.height = j.at("grid").at("height").get<std::size_t>();
    for (const auto& jp : j.at("placements")) {
      Placement p;
      p.recording_id = jp.at("id").get<std::string>();
      p.x = jp.at("x").get<std::size_t>();
      p.y = jp.at("y").get<std::size_t>();
      p.bmu_distance = jp.at("bmu_distance").get<double>();
      file.placements.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("placements file schema error: ") + e.what());
  }
  return file;
}

MapOutputs map_and_plot(const std::filesystem::path& model_path,
                        const std::filesystem::path& features_path,
                        const std::filesystem::path& manifest_path) {
  const SomModel model = load_model(model_path);
  const FeatureFile features = load_feature_file(features_path);
  const CorpusManifest manifest = load_manifest(manifest_path);

  const std::string features_hash = hash_file(features_path);
  const std::string manifest_hash = hash_file(manifest_path);
  if (model.features_hash != features_hash) {
    throw ProvenanceMismatch(
        "model was trained from a different feature file (hash " +
        model.features_hash + " vs " + features_hash + ")");
  }
  if (features.manifest_hash != manifest_hash) {
    throw ProvenanceMismatch(
        "feature file was extracted from a different manifest (hash " +
        features.manifest_hash + " vs " + manifest_hash + ")");
  }

  MapOutputs out;
  for (const auto& rec : features.records) {
    const auto row = row_for_mode(model, rec);
    out.placements.push_back(best_match(model, row, rec.id));
  }

  PlacementsFile pf;
  pf.placements = out.placements;
  pf.width = model.width;
  pf.height = model.height;
  pf.model_hash = hash_file(model_path);
  pf.features_hash = features_hash;
  pf.manifest_hash = manifest_hash;
  out.placements_json = placements_file_to_json(pf);

  PlotStyle style;
  style.provenance = "model=" + pf.model_hash + " features=" + features_hash +
                     " manifest=" + manifest_hash;
  const UMatrix u = u_matrix(model);
  out.map_svg = plot_som_map(model, u, out.placements, manifest, style);
  out.planes_svg = plot_component_planes(model, style);
  return out;
}

PlotOutputs plot_from_files(const std::filesystem::path& model_path,
                            const std::filesystem::path& placements_path,
                            const std::filesystem::path& manifest_path) {
  const SomModel model = load_model(model_path);
  std::ifstream in(placements_path);
  if (!in) {
    throw IoError("cannot open placements file: " + placements_path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  const PlacementsFile pf = placements_file_from_json(ss.str());
  const CorpusManifest manifest = load_manifest(manifest_path);

  if (pf.model_hash != hash_file(model_path)) {
    throw ProvenanceMismatch("placements were computed from a different model");
  }
  if (pf.manifest_hash != hash_file(manifest_path)) {
    throw ProvenanceMismatch("placements were computed from a different manifest");
  }

  PlotStyle style;
  style.provenance = "model=" + pf.model_hash + " features=" + pf.features_hash +
                     " manifest=" + pf.manifest_hash;
  PlotOutputs out;
  const UMatrix u = u_matrix(model);
  out.map_svg = plot_som_map(model, u, pf.placements, manifest, style);
  out.planes_svg = plot_component_planes(model, style);
  return out;
}

ReportOutputs report_from_files(const std::filesystem::path& features_path,
                                const std::filesystem::path& manifest_path) {
  const FeatureFile features = load_feature_file(features_path);
  const CorpusManifest manifest = load_manifest(manifest_path);

  const std::string features_hash = hash_file(features_path);
  const std::string manifest_hash = hash_file(manifest_path);
  if (features.manifest_hash != manifest_hash) {
    throw ProvenanceMismatch(
        "feature file was extracted from a different manifest (hash " +
        features.manifest_hash + " vs " + manifest_hash + ")");
  }
  if (features.records.empty()) {
    throw MissingFeature("feature file has no records to report on");
  }

  std::vector<std::pair<std::string, double>> peaks;
  std::vector<std::pair<std::string, double>> centroids;
  std::vector<std::string> no_peak;
  std::map<std::string, std::vector<double>> ens_peaks;
  std::map<std::string, std::vector<double>> ens_centroids;

  for (const auto& rec : features.records) {
    const RecordingEntry* entry = manifest.find(rec.id);
    if (entry == nullptr) {
      throw InconsistentInputs("feature record \"" + rec.id +
                               "\" is not in the manifest");
    }
    if (rec.form.peak_hz) {
      peaks.emplace_back(rec.id, *rec.form.peak_hz);
      ens_peaks[entry->ensemble].push_back(*rec.form.peak_hz);
    } else {
      no_peak.push_back(rec.id);
    }
    if (rec.form.centroid_hz) {
      centroids.emplace_back(rec.id, *rec.form.centroid_hz);
      ens_centroids[entry->ensemble].push_back(*rec.form.centroid_hz);
    }
  }
  if (peaks.empty()) {
    throw MissingFeature("no recording has a defined most-prominent peak");
  }

  std::vector<double> peak_values;
  for (const auto& [id, v] : peaks) peak_values.push_back(v);
  std::vector<double> centroid_values;
  for (const auto& [id, v] : centroids) centroid_values.push_back(v);

  const double median_peak = median(peak_values);
  const double median_centroid = median(centroid_values);

  ordered_json j;
  j["schema"] = "gamsom.report/1";
  j["provenance"] = {{"features_hash", features_hash},
                     {"manifest_hash", manifest_hash}};
  j["corpus"] = {
      {"name", features.corpus_name},
      {"n_pieces", features.records.size()},
      {"n_with_peak", peaks.size()},
      {"median_peak_hz", median_peak},
      {"median_centroid_hz", median_centroid},
  };

  ordered_json ensembles = ordered_json::object();
  for (const auto& [name, values] : ens_peaks) {
    ordered_json je;
    je["n"] = values.size();
    je["median_peak_hz"] = median(values);
    const auto it = ens_centroids.find(name);
    if (it != ens_centroids.end()) {
      je["median_centroid_hz"] = median(it->second);
    }
    ensembles[name] = std::move(je);
  }
  j["ensembles"] = std::move(ensembles);

  // Pieces whose most prominent peak sits way above the corpus median
  // lack clear large-scale compositional elements.
  ordered_json flagged = ordered_json::array();
  for (const auto& [id, v] : peaks) {
    if (v > 10.0 * median_peak) {
      flagged.push_back({{"id", id},
                         {"peak_hz", v},
                         {"ratio_to_median", v / median_peak}});
    }
  }
  j["flagged_no_large_scale_form"] = std::move(flagged);
  j["no_peak"] = no_peak;

  ReportOutputs out;
  out.report_json = j.dump(2) + "\n";

  PlotStyle style;
  style.provenance = "features=" + features_hash + " manifest=" + manifest_hash;
  out.peak_svg = plot_scalar_by_ensemble(peaks, manifest, "most prominent peak [Hz]",
                                         true, true, style);
  out.centroid_svg = plot_scalar_by_ensemble(
      centroids, manifest, "trajectory spectrum centroid [Hz]", true, false, style);
  return out;
}

}  // namespace gamsom
