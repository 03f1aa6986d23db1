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

#ifndef GAMSOM_TIMBRE_HPP
#define GAMSOM_TIMBRE_HPP

#include <optional>
#include <string>
#include <vector>

#include "gamsom/corpus.hpp"
#include "gamsom/spectral.hpp"

namespace gamsom {

/// Amplitude-weighted mean frequency over all bins. Throws SilentFrame
/// when the spectrum has zero total magnitude.
double spectral_centroid(const MagnitudeSpectrum& spec);

/// Amplitude-weighted standard deviation of frequency around the centroid.
double spectral_spread(const MagnitudeSpectrum& spec, double centroid);

/// Bark critical-band rate: z = 13 atan(0.00076 f) + 3.5 atan((f/7500)^2).
double bark_of_hz(double f);

inline constexpr std::size_t kBarkBands = 24;

/// Weighting g(z) of the sharpness model: 1 below 15.8 Bark, rising
/// exponentially above.
double sharpness_weight(double z);

/// Bark-weighted sharpness in acum. Bins are pooled into 24 Bark bands,
/// each band contributes (band energy)^0.23 weighted by g(z)*z at the
/// band center. A silent spectrum yields 0.
double sharpness(const MagnitudeSpectrum& spec);

/// Per-frame timbre features of one piece.
struct TimbreTrajectory {
  std::vector<double> centroid;   // Hz
  std::vector<double> spread;     // Hz
  std::vector<double> sharpness;  // acum
  double frame_rate = 0.0;        // Hz
  std::string source_id;

  std::size_t n_frames() const { return centroid.size(); }
  double duration_s() const {
    return frame_rate > 0.0 ? static_cast<double>(n_frames()) / frame_rate : 0.0;
  }
};

/// Runs the three per-frame features over the clip's frame series.
/// Silent frames repeat the previous frame's values; leading silent
/// frames are dropped. Throws TooShort (clip under one frame) and
/// AllSilent (every frame silent).
TimbreTrajectory timbre_trajectory(const AudioClip& clip);

/// Piece-level articulation summary.
struct ArticulationVector {
  double centroid_std = 0.0;    // Hz
  double spread_std = 0.0;      // Hz
  double sharpness_mean = 0.0;  // acum
  std::string source_id;
};

/// (population std of centroid, population std of spread, mean sharpness).
/// Throws TooFewFrames for trajectories shorter than 2 frames.
ArticulationVector articulation_vector(const TimbreTrajectory& traj);

/// Modulation spectrum of the centroid trajectory. peak_hz/centroid_hz
/// are null for flat trajectories.
struct TrajectorySpectrum {
  std::vector<double> magnitudes;  // modulation bins 0..N/2
  double bin_hz = 0.0;             // frame_rate / padded length
  std::size_t first_bin = 0;       // lowest bin searched (>= 1/T_piece)
  std::optional<double> peak_hz;
  std::optional<double> centroid_hz;
  std::string source_id;
};

/// Mean-removes the centroid sequence, applies a Hann window, zero-pads
/// to the next power of two >= 4x length, and takes the real-FFT
/// magnitude. The most prominent peak and the spectral centroid of the
/// result are evaluated over bins at or above 1/T_piece (DC excluded).
/// Throws TooFewFrames for trajectories shorter than 8 frames.
TrajectorySpectrum trajectory_spectrum(const TimbreTrajectory& traj);

}  // namespace gamsom

#endif  // GAMSOM_TIMBRE_HPP
