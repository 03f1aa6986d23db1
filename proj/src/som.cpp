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

#include "gamsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gamsom/errors.hpp"
#include "gamsom/rng.hpp"

namespace gamsom {

using ordered_json = nlohmann::ordered_json;

std::string to_string(FeatureMode mode) {
  return mode == FeatureMode::Tuning ? "tuning" : "articulation";
}

FeatureMode feature_mode_from_string(const std::string& s) {
  if (s == "tuning") return FeatureMode::Tuning;
  if (s == "articulation") return FeatureMode::Articulation;
  throw ValidationError("unknown feature mode \"" + s +
                        "\" (must be tuning or articulation)");
}

FeatureMatrix build_feature_matrix(const FeatureFile& file, FeatureMode mode,
                                   bool allow_constant) {
  FeatureMatrix m;
  if (file.records.empty()) {
    throw MissingFeature("feature file has no records");
  }

  if (mode == FeatureMode::Tuning) {
    m.normalization = Normalization::None;
    const auto& first = file.records.front();
    m.dim = first.tuning.values.size();
    for (const auto& r : file.records) {
      if (r.tuning.values.empty()) {
        throw MissingFeature("record \"" + r.id + "\" has no tuning vector");
      }
      if (r.tuning.values.size() != m.dim || r.sample_rate != first.sample_rate) {
        throw MixedSampleRates(
            "tuning vectors of unequal layout (" + std::to_string(m.dim) + " vs " +
            std::to_string(r.tuning.values.size()) + " dims); the corpus mixes sample rates");
      }
      m.rows.push_back(r.tuning.values);
      m.ids.push_back(r.id);
    }
    m.feature_names.resize(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
      char buf[32];
      if (first.tuning.axis == TuningAxis::Linear) {
        std::snprintf(buf, sizeof(buf), "hz_%.2f", first.tuning.freq_at(i));
      } else {
        std::snprintf(buf, sizeof(buf), "cents_%zu", i * 10 + 5);
      }
      m.feature_names[i] = buf;
    }
    return m;
  }

  // Articulation mode: 3 scalars, z-scored per dimension (population std).
  m.normalization = Normalization::ZScore;
  m.dim = 3;
  m.feature_names = {"centroid_std", "spread_std", "sharpness_mean"};
  for (const auto& r : file.records) {
    m.rows.push_back({r.articulation.centroid_std, r.articulation.spread_std,
                      r.articulation.sharpness_mean});
    m.ids.push_back(r.id);
  }

  const auto n = static_cast<double>(m.rows.size());
  m.mean.assign(m.dim, 0.0);
  m.stddev.assign(m.dim, 0.0);
  for (const auto& row : m.rows) {
    for (std::size_t d = 0; d < m.dim; ++d) m.mean[d] += row[d];
  }
  for (std::size_t d = 0; d < m.dim; ++d) m.mean[d] /= n;
  for (const auto& row : m.rows) {
    for (std::size_t d = 0; d < m.dim; ++d) {
      m.stddev[d] += (row[d] - m.mean[d]) * (row[d] - m.mean[d]);
    }
  }
  for (std::size_t d = 0; d < m.dim; ++d) m.stddev[d] = std::sqrt(m.stddev[d] / n);

  for (std::size_t d = 0; d < m.dim; ++d) {
    if (m.stddev[d] > 0.0) continue;
    if (!allow_constant) {
      throw DegenerateDimension("feature \"" + m.feature_names[d] +
                                "\" has zero variance across the corpus");
    }
  }
  for (auto& row : m.rows) {
    for (std::size_t d = 0; d < m.dim; ++d) {
      row[d] = m.stddev[d] > 0.0 ? (row[d] - m.mean[d]) / m.stddev[d] : 0.0;
    }
  }
  return m;
}

std::span<const double> SomModel::weight(std::size_t x, std::size_t y) const {
  return {weights.data() + (y * width + x) * dim, dim};
}

namespace {

double squared_distance(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

std::size_t find_bmu_index(const std::vector<double>& weights, std::size_t n_neurons,
                           std::size_t dim, const double* x) {
  std::size_t best = 0;
  double best_d = squared_distance(weights.data(), x, dim);
  for (std::size_t i = 1; i < n_neurons; ++i) {
    const double d = squared_distance(weights.data() + i * dim, x, dim);
    if (d < best_d) {  // strict: ties keep the lowest row-major index
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

SomModel train_som(const FeatureMatrix& matrix, const SomParams& params,
                   std::uint64_t seed) {
  if (matrix.rows.empty()) {
    throw InvalidParams("cannot train on an empty feature matrix");
  }
  if (params.width < 2 || params.height < 2) {
    throw InvalidParams("SOM grid must be at least 2x2");
  }
  if (params.epochs < 1) {
    throw InvalidParams("SOM training needs at least 1 epoch");
  }
  if (params.lr_start <= 0.0 || params.lr_end <= 0.0 || params.radius_end <= 0.0) {
    throw InvalidParams("learning rate and radius must stay positive");
  }

  SomModel model;
  model.width = params.width;
  model.height = params.height;
  model.dim = matrix.dim;
  model.seed = seed;
  model.params = params;
  if (model.params.radius_start <= 0.0) {
    model.params.radius_start =
        static_cast<double>(std::max(params.width, params.height)) / 2.0;
  }
  model.normalization = matrix.normalization;
  model.norm_mean = matrix.mean;
  model.norm_stddev = matrix.stddev;
  model.feature_names = matrix.feature_names;

  const std::size_t n_neurons = model.n_neurons();
  const std::size_t dim = model.dim;
  const std::size_t n_rows = matrix.rows.size();

  Rng rng(seed);

  // Initialize by sampling input rows (with replacement).
  model.weights.resize(n_neurons * dim);
  for (std::size_t i = 0; i < n_neurons; ++i) {
    const auto& row = matrix.rows[rng.bounded(static_cast<std::uint32_t>(n_rows))];
    std::copy(row.begin(), row.end(), model.weights.begin() + i * dim);
  }

  const std::size_t total_steps = params.epochs * n_rows;
  const double step_denom =
      total_steps > 1 ? static_cast<double>(total_steps - 1) : 1.0;
  const double lr_ratio = params.lr_end / params.lr_start;
  const double radius_ratio = model.params.radius_end / model.params.radius_start;

  std::vector<std::size_t> order(n_rows);
  std::iota(order.begin(), order.end(), 0);

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (const std::size_t row_idx : order) {
      const double frac = static_cast<double>(t) / step_denom;
      const double lr = params.lr_start * std::pow(lr_ratio, frac);
      const double radius = model.params.radius_start * std::pow(radius_ratio, frac);
      const double inv_two_sigma_sq = 1.0 / (2.0 * radius * radius);

      const double* x = matrix.rows[row_idx].data();
      const std::size_t bmu = find_bmu_index(model.weights, n_neurons, dim, x);
      const auto bmu_x = static_cast<double>(bmu % model.width);
      const auto bmu_y = static_cast<double>(bmu / model.width);

      for (std::size_t i = 0; i < n_neurons; ++i) {
        const double dx = static_cast<double>(i % model.width) - bmu_x;
        const double dy = static_cast<double>(i / model.width) - bmu_y;
        const double h = std::exp(-(dx * dx + dy * dy) * inv_two_sigma_sq);
        const double eta = lr * h;
        double* w = model.weights.data() + i * dim;
        for (std::size_t d = 0; d < dim; ++d) {
          w[d] += eta * (x[d] - w[d]);
        }
      }
      ++t;
    }
  }
  return model;
}

Placement best_match(const SomModel& model, std::span<const double> x,
                     const std::string& recording_id) {
  if (x.size() != model.dim) {
    throw DimMismatch("input has " + std::to_string(x.size()) +
                      " dims, model expects " + std::to_string(model.dim));
  }
  const std::size_t bmu =
      find_bmu_index(model.weights, model.n_neurons(), model.dim, x.data());
  Placement p;
  p.recording_id = recording_id;
  p.x = bmu % model.width;
  p.y = bmu / model.width;
  p.bmu_distance = std::sqrt(
      squared_distance(model.weights.data() + bmu * model.dim, x.data(), model.dim));
  return p;
}

std::vector<double> normalize_row(const SomModel& model,
                                  std::span<const double> raw) {
  if (raw.size() != model.dim) {
    throw DimMismatch("input has " + std::to_string(raw.size()) +
                      " dims, model expects " + std::to_string(model.dim));
  }
  std::vector<double> out(raw.begin(), raw.end());
  if (model.normalization == Normalization::ZScore) {
    for (std::size_t d = 0; d < model.dim; ++d) {
      out[d] = model.norm_stddev[d] > 0.0
                   ? (out[d] - model.norm_mean[d]) / model.norm_stddev[d]
                   : 0.0;
    }
  }
  return out;
}

UMatrix u_matrix(const SomModel& model) {
  UMatrix u;
  u.width = model.width;
  u.height = model.height;
  u.values.assign(model.n_neurons(), 0.0);
  for (std::size_t y = 0; y < model.height; ++y) {
    for (std::size_t x = 0; x < model.width; ++x) {
      double sum = 0.0;
      std::size_t count = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const auto nx = static_cast<std::ptrdiff_t>(x) + dx;
          const auto ny = static_cast<std::ptrdiff_t>(y) + dy;
          if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(model.width) ||
              ny >= static_cast<std::ptrdiff_t>(model.height)) {
            continue;
          }
          sum += std::sqrt(squared_distance(
              model.weights.data() + (y * model.width + x) * model.dim,
              model.weights.data() +
                  (static_cast<std::size_t>(ny) * model.width +
                   static_cast<std::size_t>(nx)) * model.dim,
              model.dim));
          ++count;
        }
      }
      u.values[y * model.width + x] = count > 0 ? sum / static_cast<double>(count) : 0.0;
    }
  }
  return u;
}

std::vector<ComponentPlane> component_planes(const SomModel& model) {
  std::vector<ComponentPlane> planes(model.dim);
  for (std::size_t d = 0; d < model.dim; ++d) {
    planes[d].feature_index = d;
    planes[d].feature_name =
        d < model.feature_names.size() ? model.feature_names[d] : "";
    planes[d].values.resize(model.n_neurons());
    for (std::size_t i = 0; i < model.n_neurons(); ++i) {
      planes[d].values[i] = model.weights[i * model.dim + d];
    }
  }
  return planes;
}

double quantization_error(const SomModel& model, const FeatureMatrix& matrix) {
  if (matrix.dim != model.dim) {
    throw DimMismatch("matrix dim " + std::to_string(matrix.dim) +
                      " does not match model dim " + std::to_string(model.dim));
  }
  if (matrix.rows.empty()) {
    throw InvalidParams("quantization error of an empty matrix");
  }
  double sum = 0.0;
  for (const auto& row : matrix.rows) {
    sum += best_match(model, row).bmu_distance;
  }
  return sum / static_cast<double>(matrix.rows.size());
}

std::string model_to_json(const SomModel& model) {
  ordered_json j;
  j["schema"] = "gamsom.som/1";
  j["provenance"] = {
      {"features_hash", model.features_hash},
      {"config_hash", model.config_hash},
      {"mode", to_string(model.mode)},
  };
  j["grid"] = {{"width", model.width}, {"height", model.height}};
  j["dim"] = model.dim;
  j["seed"] = model.seed;
  j["training"] = {
      {"epochs", model.params.epochs},
      {"lr_start", model.params.lr_start},
      {"lr_end", model.params.lr_end},
      {"radius_start", model.params.radius_start},
      {"radius_end", model.params.radius_end},
  };
  j["normalization"] = model.normalization == Normalization::ZScore ? "zscore" : "none";
  j["norm_mean"] = model.norm_mean;
  j["norm_stddev"] = model.norm_stddev;
  j["feature_names"] = model.feature_names;
  j["weights"] = model.weights;  // row-major neurons, full precision
  return j.dump() + "\n";
}

SomModel model_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  SomModel m;
  try {
    if (j.at("schema").get<std::string>() != "gamsom.som/1") {
      throw ParseError("unknown model file schema");
    }
    const auto& prov = j.at("provenance");
    m.features_hash = prov.at("features_hash").get<std::string>();
    m.config_hash = prov.at("config_hash").get<std::string>();
    m.mode = feature_mode_from_string(prov.at("mode").get<std::string>());
    m.width = j.at("grid").at("width").get<std::size_t>();
    m.height = j.at("grid").at("height").get<std::size_t>();
    m.dim = j.at("dim").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& tr = j.at("training");
    m.params.width = m.width;
    m.params.height = m.height;
    m.params.epochs = tr.at("epochs").get<std::size_t>();
    m.params.lr_start = tr.at("lr_start").get<double>();
    m.params.lr_end = tr.at("lr_end").get<double>();
    m.params.radius_start = tr.at("radius_start").get<double>();
    m.params.radius_end = tr.at("radius_end").get<double>();
    m.normalization = j.at("normalization").get<std::string>() == "zscore"
                          ? Normalization::ZScore
                          : Normalization::None;
    m.norm_mean = j.at("norm_mean").get<std::vector<double>>();
    m.norm_stddev = j.at("norm_stddev").get<std::vector<double>>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.weights = j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file schema error: ") + e.what());
  }
  if (m.weights.size() != m.width * m.height * m.dim) {
    throw ValidationError("model weight count does not match grid/dim");
  }
  return m;
}

void save_model(const SomModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write model file: " + path.string());
  }
  out << model_to_json(model);
  if (!out) {
    throw IoError("model file write failed: " + path.string());
  }
}

SomModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open model file: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace gamsom
