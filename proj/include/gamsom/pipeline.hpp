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

#ifndef GAMSOM_PIPELINE_HPP
#define GAMSOM_PIPELINE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "gamsom/config.hpp"
#include "gamsom/corpus.hpp"
#include "gamsom/features.hpp"
#include "gamsom/som.hpp"
#include "gamsom/viz.hpp"

namespace gamsom {

/// Extracts features for every manifest entry with a bounded worker pool.
/// Records are emitted in manifest order regardless of completion order;
/// per-entry failures land in file.errors. manifest_path is hashed into
/// the provenance block.
FeatureFile extract_corpus(const CorpusManifest& manifest,
                           const std::filesystem::path& manifest_path,
                           const PipelineConfig& config);

/// Trains a SOM from a feature file on disk, recording the file's hash.
SomModel train_from_file(const std::filesystem::path& features_path,
                         FeatureMode mode, const PipelineConfig& config,
                         bool allow_constant = false);

/// Placements artifact with its provenance chain.
struct PlacementsFile {
  std::vector<Placement> placements;
  std::size_t width = 0;
  std::size_t height = 0;
  std::string model_hash;
  std::string features_hash;
  std::string manifest_hash;
};

std::string placements_file_to_json(const PlacementsFile& file);
PlacementsFile placements_file_from_json(const std::string& text);

struct MapOutputs {
  std::vector<Placement> placements;
  std::string placements_json;
  std::string map_svg;
  std::string planes_svg;
};

/// Places every recording on the trained map and renders the map +
/// component-plane figures. Verifies the provenance chain
/// (model.features_hash vs the features file, features.manifest_hash vs
/// the manifest file); a mismatch is a hard ProvenanceMismatch error.
MapOutputs map_and_plot(const std::filesystem::path& model_path,
                        const std::filesystem::path& features_path,
                        const std::filesystem::path& manifest_path);

struct PlotOutputs {
  std::string map_svg;
  std::string planes_svg;
};

/// Re-renders the figures from an existing placements file, verifying
/// that it was computed from exactly this model and manifest.
PlotOutputs plot_from_files(const std::filesystem::path& model_path,
                            const std::filesystem::path& placements_path,
                            const std::filesystem::path& manifest_path);

struct ReportOutputs {
  std::string report_json;
  std::string peak_svg;
  std::string centroid_svg;
};

/// Per-ensemble and corpus-wide medians of the form scalars plus the
/// strip plots. Pieces whose most-prominent-peak frequency exceeds 10x
/// the corpus median are flagged as lacking clear large-scale form.
ReportOutputs report_from_files(const std::filesystem::path& features_path,
                                const std::filesystem::path& manifest_path);

}  // namespace gamsom

#endif  // GAMSOM_PIPELINE_HPP
