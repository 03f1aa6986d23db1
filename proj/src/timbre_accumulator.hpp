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

#ifndef GAMSOM_SRC_TIMBRE_ACCUMULATOR_HPP
#define GAMSOM_SRC_TIMBRE_ACCUMULATOR_HPP

#include <string>
#include <vector>

#include "gamsom/errors.hpp"
#include "gamsom/timbre.hpp"

namespace gamsom::detail {

/// Per-bin Bark band indices for a fixed spectrum layout; built once per
/// clip so per-frame sharpness avoids re-evaluating the Bark mapping.
struct BarkBandMap {
  std::vector<std::size_t> band_of_bin;  // 0..kBarkBands-1

  BarkBandMap() = default;
  BarkBandMap(std::size_t n_bins, double bin_hz) {
    band_of_bin.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double z = bark_of_hz(static_cast<double>(k) * bin_hz);
      auto b = static_cast<std::size_t>(z);  // z >= 0
      if (b >= kBarkBands) b = kBarkBands - 1;
      band_of_bin[k] = b;
    }
  }
};

double sharpness_banded(const std::vector<double>& magnitudes,
                        const BarkBandMap& map);

/// Streams frame spectra into a TimbreTrajectory, applying the
/// silent-frame policy: repeat the previous frame's values, drop leading
/// silent frames.
class TimbreAccumulator {
 public:
  explicit TimbreAccumulator(double frame_rate) : frame_rate_(frame_rate) {}

  void add(const MagnitudeSpectrum& spec) {
    if (map_.band_of_bin.size() != spec.magnitudes.size()) {
      map_ = BarkBandMap(spec.magnitudes.size(), spec.bin_hz);
    }
    double total = 0.0;
    for (const double m : spec.magnitudes) total += m;
    if (total <= 0.0) {
      if (!traj_.centroid.empty()) {
        traj_.centroid.push_back(traj_.centroid.back());
        traj_.spread.push_back(traj_.spread.back());
        traj_.sharpness.push_back(traj_.sharpness.back());
      }
      return;
    }
    const double c = spectral_centroid(spec);
    traj_.centroid.push_back(c);
    traj_.spread.push_back(spectral_spread(spec, c));
    traj_.sharpness.push_back(sharpness_banded(spec.magnitudes, map_));
  }

  TimbreTrajectory finish(const std::string& source_id) {
    if (traj_.centroid.empty()) {
      throw AllSilent("every frame of \"" + source_id + "\" is silent");
    }
    traj_.frame_rate = frame_rate_;
    traj_.source_id = source_id;
    return std::move(traj_);
  }

 private:
  double frame_rate_;
  BarkBandMap map_;
  TimbreTrajectory traj_;
};

}  // namespace gamsom::detail

#endif  // GAMSOM_SRC_TIMBRE_ACCUMULATOR_HPP
