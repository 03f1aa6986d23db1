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

#ifndef GAMSOM_SOM_HPP
#define GAMSOM_SOM_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gamsom/features.hpp"

namespace gamsom {

enum class FeatureMode { Tuning, Articulation };

std::string to_string(FeatureMode mode);
FeatureMode feature_mode_from_string(const std::string& s);

enum class Normalization { None, ZScore };

/// Input matrix for SOM training: one row per recording.
struct FeatureMatrix {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> ids;            // aligned with rows
  std::vector<std::string> feature_names;  // one per dimension
  std::size_t dim = 0;
  Normalization normalization = Normalization::None;
  std::vector<double> mean;  // per dimension, when z-scored
  std::vector<double> stddev;
};

/// Builds the SOM input matrix from a feature file. Tuning mode keeps the
/// raw unit-norm tuning vectors; articulation mode z-scores the 3 scalars
/// per dimension (population std). Throws MixedSampleRates when tuning
/// vector lengths differ, MissingFeature when a record lacks a requested
/// feature, DegenerateDimension on zero variance unless allow_constant
/// maps that dimension to 0.
FeatureMatrix build_feature_matrix(const FeatureFile& file, FeatureMode mode,
                                   bool allow_constant = false);

struct SomParams {
  std::size_t width = 20;
  std::size_t height = 15;
  std::size_t epochs = 100;
  double lr_start = 0.5;
  double lr_end = 0.01;
  double radius_start = 0.0;  // 0 -> max(width, height) / 2
  double radius_end = 1.0;
};

/// Trained map. Weights are neuron-major, row-major over the grid:
/// weight(d) of cell (x, y) lives at weights[(y*width + x)*dim + d].
struct SomModel {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t dim = 0;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  SomParams params;
  FeatureMode mode = FeatureMode::Tuning;
  Normalization normalization = Normalization::None;
  std::vector<double> norm_mean;
  std::vector<double> norm_stddev;
  std::vector<std::string> feature_names;

  // Provenance
  std::string features_hash;
  std::string config_hash;

  std::size_t n_neurons() const { return width * height; }
  std::span<const double> weight(std::size_t x, std::size_t y) const;
};

/// Classic online Kohonen training: weights initialized by sampling input
/// rows, rows visited in a fresh seeded shuffle per epoch, all weights
/// updated per step with a Gaussian neighborhood. Learning rate and
/// radius decay exponentially from start to end over the total step
/// count. Deterministic in (matrix, params, seed).
SomModel train_som(const FeatureMatrix& matrix, const SomParams& params,
                   std::uint64_t seed);

struct Placement {
  std::string recording_id;
  std::size_t x = 0;
  std::size_t y = 0;
  double bmu_distance = 0.0;
};

/// Best-matching unit by Euclidean distance; ties break to the lowest
/// row-major index. Throws DimMismatch.
Placement best_match(const SomModel& model, std::span<const double> x,
                     const std::string& recording_id = "");

/// Applies the model's stored normalization to a raw feature row.
std::vector<double> normalize_row(const SomModel& model,
                                  std::span<const double> raw);

struct UMatrix {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;  // row-major, mean distance to 8-neighbors

  double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
};

UMatrix u_matrix(const SomModel& model);

struct ComponentPlane {
  std::size_t feature_index = 0;
  std::string feature_name;
  std::vector<double> values;  // row-major per neuron
};

std::vector<ComponentPlane> component_planes(const SomModel& model);

/// Mean BMU distance over the matrix rows. Throws DimMismatch.
double quantization_error(const SomModel& model, const FeatureMatrix& matrix);

std::string model_to_json(const SomModel& model);
SomModel model_from_json(const std::string& text);
void save_model(const SomModel& model, const std::filesystem::path& path);
SomModel load_model(const std::filesystem::path& path);

}  // namespace gamsom

#endif  // GAMSOM_SOM_HPP
