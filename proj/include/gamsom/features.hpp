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

#ifndef GAMSOM_FEATURES_HPP
#define GAMSOM_FEATURES_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gamsom/corpus.hpp"
#include "gamsom/spectral.hpp"
#include "gamsom/timbre.hpp"

namespace gamsom {

struct FormScalars {
  std::optional<double> peak_hz;
  std::optional<double> centroid_hz;
};

/// All per-recording features the pipeline extracts.
struct RecordFeatures {
  std::string id;
  int sample_rate = 0;
  std::size_t n_frames = 0;
  double frame_rate = 0.0;
  TuningVector tuning;
  ArticulationVector articulation;
  FormScalars form;
};

/// Extracts tuning vector, articulation vector and form scalars from one
/// clip in a single frame/FFT pass. Numerically identical to calling
/// tuning_vector / timbre_trajectory / articulation_vector /
/// trajectory_spectrum separately.
RecordFeatures extract_features(const AudioClip& clip,
                                TuningAxis axis = TuningAxis::Linear);

struct ExtractionError {
  std::string id;
  std::string message;
};

/// On-disk feature file: records keyed by recording id, in manifest order.
struct FeatureFile {
  std::string corpus_name;
  TuningAxis tuning_axis = TuningAxis::Linear;
  std::vector<RecordFeatures> records;
  std::vector<ExtractionError> errors;

  // Provenance block carried through as-is.
  std::string config_hash;
  std::string manifest_hash;
  std::uint64_t seed = 0;

  const RecordFeatures* find(const std::string& id) const;
};

std::string feature_file_to_json(const FeatureFile& file);
FeatureFile feature_file_from_json(const std::string& text);

void save_feature_file(const FeatureFile& file, const std::filesystem::path& path);
FeatureFile load_feature_file(const std::filesystem::path& path);

}  // namespace gamsom

#endif  // GAMSOM_FEATURES_HPP
