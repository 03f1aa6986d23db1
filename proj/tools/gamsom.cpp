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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gamsom/config.hpp"
#include "gamsom/errors.hpp"
#include "gamsom/pipeline.hpp"
#include "gamsom/synth.hpp"

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) {
    throw gamsom::IoError("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw gamsom::IoError("write failed: " + path.string());
  }
}

void parse_grid(const std::string& grid, gamsom::SomParams& params) {
  const auto x = grid.find('x');
  if (x == std::string::npos) {
    throw gamsom::InvalidParams("--grid expects WxH, e.g. 20x15");
  }
  try {
    params.width = std::stoul(grid.substr(0, x));
    params.height = std::stoul(grid.substr(x + 1));
  } catch (const std::exception&) {
    throw gamsom::InvalidParams("--grid expects WxH, e.g. 20x15");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tonal-system and articulation clustering of recording corpora "
               "with self-organizing maps"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "TOML-style config file");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
  std::string synth_out = "out/corpus";
  std::uint64_t synth_seed = 0;
  bool synth_seed_set = false;
  std::size_t synth_ensembles = 0, synth_pieces = 0;
  std::string synth_regions;
  double synth_duration = 0.0;
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--seed", synth_seed, "corpus seed")->each([&](const std::string&) {
    synth_seed_set = true;
  });
  synth->add_option("--ensembles", synth_ensembles, "number of ensembles");
  synth->add_option("--pieces", synth_pieces, "pieces per ensemble");
  synth->add_option("--region-assignment", synth_regions,
                    "by_ensemble|alternate|all_indonesian|all_western");
  synth->add_option("--duration", synth_duration, "piece duration in seconds");

  // extract
  auto* extract = app.add_subcommand("extract", "extract features from a corpus");
  std::string extract_manifest, extract_out = "features.json", extract_axis;
  int extract_jobs = -1;
  extract->add_option("--manifest", extract_manifest, "manifest JSON")->required();
  extract->add_option("--out", extract_out, "output feature file");
  extract->add_option("--axis", extract_axis, "tuning axis: linear|log_cents");
  extract->add_option("--jobs", extract_jobs, "worker count (0 = hardware)");

  // train
  auto* train = app.add_subcommand("train", "train a SOM on extracted features");
  std::string train_features, train_mode = "tuning", train_out = "model.json";
  std::string train_grid;
  std::uint64_t train_seed = 0;
  bool train_seed_set = false;
  long long train_epochs = -1;
  bool allow_constant = false;
  train->add_option("--features", train_features, "feature file")->required();
  train->add_option("--mode", train_mode, "tuning|articulation");
  train->add_option("--out", train_out, "output model file");
  train->add_option("--grid", train_grid, "grid size WxH");
  train->add_option("--epochs", train_epochs, "training epochs");
  train->add_option("--seed", train_seed, "training seed")->each([&](const std::string&) {
    train_seed_set = true;
  });
  train->add_flag("--allow-constant", allow_constant,
                  "map zero-variance feature dimensions to 0 instead of failing");

  // map
  auto* map_cmd = app.add_subcommand(
      "map", "place recordings on a trained map and render the figures");
  std::string map_model, map_features, map_manifest, map_out = "out";
  map_cmd->add_option("--model", map_model, "model file")->required();
  map_cmd->add_option("--features", map_features, "feature file")->required();
  map_cmd->add_option("--manifest", map_manifest, "manifest JSON")->required();
  map_cmd->add_option("--out", map_out, "output directory");

  // plot
  auto* plot_cmd = app.add_subcommand(
      "plot", "re-render the map figures from an existing placements file");
  std::string plot_model, plot_placements, plot_manifest, plot_out = "out";
  plot_cmd->add_option("--model", plot_model, "model file")->required();
  plot_cmd->add_option("--placements", plot_placements, "placements file")->required();
  plot_cmd->add_option("--manifest", plot_manifest, "manifest JSON")->required();
  plot_cmd->add_option("--out", plot_out, "output directory");

  // report
  auto* report_cmd = app.add_subcommand(
      "report", "summarize form scalars with medians and strip plots");
  std::string report_features, report_manifest, report_out = "out";
  report_cmd->add_option("--features", report_features, "feature file")->required();
  report_cmd->add_option("--manifest", report_manifest, "manifest JSON")->required();
  report_cmd->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    gamsom::PipelineConfig config;
    if (!config_path.empty()) {
      config = gamsom::load_config(config_path);
    }

    if (synth->parsed()) {
      if (synth_seed_set) config.seed = synth_seed;
      config.synth.seed = config.seed;
      if (synth_ensembles > 0) config.synth.n_ensembles = synth_ensembles;
      if (synth_pieces > 0) config.synth.pieces_per_ensemble = synth_pieces;
      if (!synth_regions.empty()) {
        config.synth.region_assignment =
            gamsom::region_assignment_from_string(synth_regions);
      }
      if (synth_duration > 0.0) config.synth.duration_s = synth_duration;
      const auto manifest = gamsom::synth_corpus(config.synth, synth_out);
      std::cout << (fs::path(synth_out) / "manifest.json").string() << "\n";
      std::cerr << "synthesized " << manifest.entries.size() << " pieces\n";
      return 0;
    }

    if (extract->parsed()) {
      if (!extract_axis.empty()) {
        config.tuning_axis = gamsom::tuning_axis_from_string(extract_axis);
      }
      if (extract_jobs >= 0) config.jobs = extract_jobs;
      const auto manifest = gamsom::load_manifest(extract_manifest);
      const auto features =
          gamsom::extract_corpus(manifest, extract_manifest, config);
      gamsom::save_feature_file(features, extract_out);
      std::cout << extract_out << "\n";
      if (!features.errors.empty()) {
        for (const auto& e : features.errors) {
          std::cerr << "error: " << e.id << ": " << e.message << "\n";
        }
        std::cerr << features.records.size() << " extracted, "
                  << features.errors.size() << " failed\n";
        return 1;
      }
      std::cerr << features.records.size() << " extracted\n";
      return 0;
    }

    if (train->parsed()) {
      if (train_seed_set) config.seed = train_seed;
      if (!train_grid.empty()) parse_grid(train_grid, config.som);
      if (train_epochs >= 0) config.som.epochs = static_cast<std::size_t>(train_epochs);
      const auto mode = gamsom::feature_mode_from_string(train_mode);
      const auto model =
          gamsom::train_from_file(train_features, mode, config, allow_constant);
      gamsom::save_model(model, train_out);
      std::cout << train_out << "\n";
      return 0;
    }

    if (map_cmd->parsed()) {
      fs::create_directories(map_out);
      const auto out = gamsom::map_and_plot(map_model, map_features, map_manifest);
      const auto base = fs::path(map_out);
      write_text(base / "placements.json", out.placements_json);
      write_text(base / "map.svg", out.map_svg);
      write_text(base / "component_planes.svg", out.planes_svg);
      std::cout << (base / "placements.json").string() << "\n";
      return 0;
    }

    if (plot_cmd->parsed()) {
      fs::create_directories(plot_out);
      const auto out =
          gamsom::plot_from_files(plot_model, plot_placements, plot_manifest);
      const auto base = fs::path(plot_out);
      write_text(base / "map.svg", out.map_svg);
      write_text(base / "component_planes.svg", out.planes_svg);
      std::cout << (base / "map.svg").string() << "\n";
      return 0;
    }

    if (report_cmd->parsed()) {
      fs::create_directories(report_out);
      const auto out = gamsom::report_from_files(report_features, report_manifest);
      const auto base = fs::path(report_out);
      write_text(base / "report.json", out.report_json);
      write_text(base / "peak_hz.svg", out.peak_svg);
      write_text(base / "centroid_hz.svg", out.centroid_svg);
      std::cout << (base / "report.json").string() << "\n";
      return 0;
    }
  } catch (const gamsom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
