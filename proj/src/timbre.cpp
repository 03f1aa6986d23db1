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

#include "gamsom/timbre.hpp"

#include <algorithm>
#include <cmath>

#include "gamsom/errors.hpp"
#include "gamsom/fft.hpp"
#include "timbre_accumulator.hpp"

namespace gamsom {
namespace {

// Kahan-compensated sum; fixed evaluation order keeps aggregation
// independent of call sites.
double ksum(const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (const double x : v) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double population_std(const std::vector<double>& v) {
  const double mean = ksum(v) / static_cast<double>(v.size());
  double s = 0.0, c = 0.0;
  for (const double x : v) {
    const double d = (x - mean) * (x - mean) - c;
    const double t = s + d;
    c = (t - s) - d;
    s = t;
  }
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

double spectral_centroid(const MagnitudeSpectrum& spec) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < spec.magnitudes.size(); ++k) {
    const double f = static_cast<double>(k) * spec.bin_hz;
    num += f * spec.magnitudes[k];
    den += spec.magnitudes[k];
  }
  if (den <= 0.0) {
    throw SilentFrame("spectral centroid of a silent frame is undefined");
  }
  return num / den;
}

double spectral_spread(const MagnitudeSpectrum& spec, double centroid) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < spec.magnitudes.size(); ++k) {
    const double f = static_cast<double>(k) * spec.bin_hz;
    num += (f - centroid) * (f - centroid) * spec.magnitudes[k];
    den += spec.magnitudes[k];
  }
  if (den <= 0.0) {
    throw SilentFrame("spectral spread of a silent frame is undefined");
  }
  return std::sqrt(num / den);
}

double bark_of_hz(double f) {
  return 13.0 * std::atan(0.00076 * f) + 3.5 * std::atan((f / 7500.0) * (f / 7500.0));
}

double sharpness_weight(double z) {
  if (z <= 15.8) return 1.0;
  return 0.15 * std::exp(0.42 * (z - 15.8)) + 0.85;
}

namespace detail {

double sharpness_banded(const std::vector<double>& magnitudes,
                        const BarkBandMap& map) {
  double energy[kBarkBands] = {0.0};
  for (std::size_t k = 0; k < magnitudes.size(); ++k) {
    energy[map.band_of_bin[k]] += magnitudes[k] * magnitudes[k];
  }
  double num = 0.0, den = 0.0;
  for (std::size_t b = 0; b < kBarkBands; ++b) {
    if (energy[b] <= 0.0) continue;
    const double loud = std::pow(energy[b], 0.23);  // specific-loudness proxy
    const double z = static_cast<double>(b) + 0.5;  // band center in Bark
    num += loud * sharpness_weight(z) * z;
    den += loud;
  }
  if (den <= 0.0) return 0.0;
  return 0.11 * num / den;
}

}  // namespace detail

double sharpness(const MagnitudeSpectrum& spec) {
  const detail::BarkBandMap map(spec.magnitudes.size(), spec.bin_hz);
  return detail::sharpness_banded(spec.magnitudes, map);
}

TimbreTrajectory timbre_trajectory(const AudioClip& clip) {
  const double frame_rate =
      static_cast<double>(clip.sample_rate) / static_cast<double>(kHop);
  detail::TimbreAccumulator acc(frame_rate);
  for_each_frame_spectrum(clip, [&acc](std::size_t, const MagnitudeSpectrum& spec) {
    acc.add(spec);
  });
  return acc.finish(clip.source_id);
}

ArticulationVector articulation_vector(const TimbreTrajectory& traj) {
  if (traj.n_frames() < 2) {
    throw TooFewFrames("articulation vector needs at least 2 frames, got " +
                       std::to_string(traj.n_frames()));
  }
  ArticulationVector v;
  v.centroid_std = population_std(traj.centroid);
  v.spread_std = population_std(traj.spread);
  v.sharpness_mean = ksum(traj.sharpness) / static_cast<double>(traj.n_frames());
  v.source_id = traj.source_id;
  return v;
}

TrajectorySpectrum trajectory_spectrum(const TimbreTrajectory& traj) {
  const std::size_t n = traj.n_frames();
  if (n < 8) {
    throw TooFewFrames("trajectory spectrum needs at least 8 frames, got " +
                       std::to_string(n));
  }

  const double mean = ksum(traj.centroid) / static_cast<double>(n);
  const auto& w = hann_window(n);
  const std::size_t padded = next_pow2(4 * n);
  std::vector<double> x(padded, 0.0);
  bool flat = true;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (traj.centroid[i] - mean) * w[i];
    if (traj.centroid[i] != traj.centroid[0]) flat = false;
  }

  TrajectorySpectrum ts;
  ts.bin_hz = traj.frame_rate / static_cast<double>(padded);
  ts.source_id = traj.source_id;
  ts.magnitudes.resize(padded / 2 + 1);
  RealFft fft(padded);
  fft.magnitudes(x, ts.magnitudes);

  // Exclude DC and everything below one cycle per piece: 1/T = frame_rate/n,
  // so the first admissible bin is ceil(padded/n), computed exactly.
  ts.first_bin = (padded + n - 1) / n;
  if (ts.first_bin < 1) ts.first_bin = 1;

  if (flat) {
    return ts;  // peak/centroid stay null
  }

  std::size_t peak_bin = ts.first_bin;
  double peak_mag = -1.0;
  double num = 0.0, den = 0.0;
  for (std::size_t k = ts.first_bin; k < ts.magnitudes.size(); ++k) {
    const double m = ts.magnitudes[k];
    if (m > peak_mag) {
      peak_mag = m;
      peak_bin = k;
    }
    const double f = static_cast<double>(k) * ts.bin_hz;
    num += f * m;
    den += m;
  }
  if (peak_mag <= 0.0 || den <= 0.0) {
    return ts;  // numerically flat
  }
  ts.peak_hz = static_cast<double>(peak_bin) * ts.bin_hz;
  ts.centroid_hz = num / den;
  return ts;
}

}  // namespace gamsom
