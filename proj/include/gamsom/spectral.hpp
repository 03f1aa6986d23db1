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

#ifndef GAMSOM_SPECTRAL_HPP
#define GAMSOM_SPECTRAL_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gamsom/corpus.hpp"

namespace gamsom {

// Analysis frame geometry. The frame length is fixed; the hop is always
// half a frame (50% overlap) and a Hann window is applied per frame.
inline constexpr std::size_t kFrameLen = 16384;  // 2^14
inline constexpr std::size_t kHop = kFrameLen / 2;

// Band limits of the tuning vector.
inline constexpr double kTuningLoHz = 20.0;
inline constexpr double kTuningHiHz = 1280.0;

struct FrameSeries {
  const AudioClip* clip = nullptr;
  std::size_t frame_len = kFrameLen;
  std::size_t hop = kHop;
  std::size_t n_frames = 0;
  double frame_rate = 0.0;  // sample_rate / hop
  bool windowed = true;

  /// Copies frame i (Hann-windowed) into out; out.size() == frame_len.
  void copy_windowed(std::size_t i, std::span<double> out) const;
};

/// Splits the clip into 50%-overlapped Hann frames. Throws TooShort when
/// the clip holds less than one frame. Trailing partial frames are
/// discarded.
FrameSeries frame_signal(const AudioClip& clip);

/// Periodic Hann window of length n.
const std::vector<double>& hann_window(std::size_t n);

struct MagnitudeSpectrum {
  std::vector<double> magnitudes;  // bins 0..n/2, all >= 0
  double bin_hz = 0.0;             // sample_rate / frame_len
};

/// Magnitude spectrum of one windowed frame (length kFrameLen).
MagnitudeSpectrum magnitude_spectrum(std::span<const double> frame,
                                     double sample_rate);

enum class TuningAxis { Linear, LogCents };

std::string to_string(TuningAxis axis);
TuningAxis tuning_axis_from_string(const std::string& s);

/// Band-limited averaged magnitude spectrum; the tonal-system fingerprint.
struct TuningVector {
  std::vector<double> values;  // unit L2 norm
  double f_lo = kTuningLoHz;
  double f_hi = kTuningHiHz;
  TuningAxis axis = TuningAxis::Linear;
  double bin_hz = 0.0;     // linear axis: Hz per bin of the source spectrum
  std::size_t first_bin = 0;  // linear axis: index of the first retained bin
  std::string source_id;

  /// Center frequency of element i.
  double freq_at(std::size_t i) const;
};

/// Per-bin mean of the frame magnitude spectra, restricted to bins with
/// center frequency in [20, 1280] Hz, then L2-normalized. Throws
/// SilentInput when the averaged band is identically zero.
TuningVector tuning_vector(const AudioClip& clip,
                           TuningAxis axis = TuningAxis::Linear);

/// Runs the frame/FFT pass once, invoking cb with each frame's magnitude
/// spectrum in order. Shared by tuning_vector, timbre_trajectory and the
/// fused feature extractor so all paths see identical numbers.
void for_each_frame_spectrum(
    const AudioClip& clip,
    const std::function<void(std::size_t, const MagnitudeSpectrum&)>& cb);

/// [k_lo, k_hi] (inclusive) indices of spectrum bins whose center lies in
/// the tuning band, for the given bin width.
std::pair<std::size_t, std::size_t> tuning_band_bins(double bin_hz);

// Number of cents cells when axis == LogCents (10 cents per cell over six
// octaves).
inline constexpr std::size_t kCentsCells = 720;

}  // namespace gamsom

#endif  // GAMSOM_SPECTRAL_HPP
