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

#ifndef GAMSOM_SRC_TUNING_ACCUMULATOR_HPP
#define GAMSOM_SRC_TUNING_ACCUMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gamsom/errors.hpp"
#include "gamsom/spectral.hpp"

namespace gamsom::detail {

// Kahan-compensated per-bin accumulation of frame magnitudes over the
// tuning band (plus one guard bin each side for log-axis interpolation).
// Shared by tuning_vector and the fused extractor so both paths produce
// identical numbers.
class TuningAccumulator {
 public:
  TuningAccumulator(double bin_hz, std::size_t n_bins) : bin_hz_(bin_hz) {
    auto [k_lo, k_hi] = tuning_band_bins(bin_hz);
    k_lo_ = k_lo;
    k_hi_ = std::min(k_hi, n_bins - 1);
    acc_lo_ = k_lo_ > 0 ? k_lo_ - 1 : 0;
    acc_hi_ = std::min(k_hi_ + 1, n_bins - 1);
    sum_.assign(acc_hi_ - acc_lo_ + 1, 0.0);
    comp_.assign(sum_.size(), 0.0);
  }

  void add(const MagnitudeSpectrum& spec) {
    for (std::size_t k = acc_lo_; k <= acc_hi_; ++k) {
      const std::size_t i = k - acc_lo_;
      const double y = spec.magnitudes[k] - comp_[i];
      const double t = sum_[i] + y;
      comp_[i] = (t - sum_[i]) - y;
      sum_[i] = t;
    }
    ++n_frames_;
  }

  TuningVector finish(TuningAxis axis, const std::string& source_id) const {
    if (n_frames_ == 0) {
      throw TooShort("no frames accumulated");
    }
    std::vector<double> mean(sum_.size());
    for (std::size_t i = 0; i < sum_.size(); ++i) {
      mean[i] = sum_[i] / static_cast<double>(n_frames_);
    }

    TuningVector tv;
    tv.axis = axis;
    tv.bin_hz = bin_hz_;
    tv.first_bin = k_lo_;
    tv.source_id = source_id;

    if (axis == TuningAxis::Linear) {
      tv.values.assign(mean.begin() + static_cast<std::ptrdiff_t>(k_lo_ - acc_lo_),
                       mean.begin() + static_cast<std::ptrdiff_t>(k_hi_ - acc_lo_ + 1));
    } else {
      tv.values.resize(kCentsCells);
      for (std::size_t j = 0; j < kCentsCells; ++j) {
        const double f = kTuningLoHz *
            std::pow(2.0, (static_cast<double>(j) + 0.5) * 10.0 / 1200.0);
        const double pos = f / bin_hz_;
        auto i0 = static_cast<std::size_t>(std::floor(pos));
        if (i0 < acc_lo_) i0 = acc_lo_;
        if (i0 >= acc_hi_) i0 = acc_hi_ - 1;
        const double frac = pos - static_cast<double>(i0);
        const double a = mean[i0 - acc_lo_];
        const double b = mean[i0 + 1 - acc_lo_];
        tv.values[j] = a + (b - a) * frac;
      }
    }

    double norm_sq = 0.0;
    for (const double v : tv.values) norm_sq += v * v;
    if (norm_sq <= 0.0) {
      throw SilentInput("averaged tuning band is identically zero for \"" +
                        source_id + "\"");
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : tv.values) v *= inv;
    return tv;
  }

 private:
  double bin_hz_;
  std::size_t k_lo_ = 0, k_hi_ = 0;      // retained band
  std::size_t acc_lo_ = 0, acc_hi_ = 0;  // accumulated range (with guards)
  std::vector<double> sum_, comp_;
  std::size_t n_frames_ = 0;
};

}  // namespace gamsom::detail

#endif  // GAMSOM_SRC_TUNING_ACCUMULATOR_HPP
