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

#include "gamsom/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "gamsom/errors.hpp"
#include "gamsom/fft.hpp"
#include "tuning_accumulator.hpp"

namespace gamsom {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// One FFT instance per size per thread; RealFft is not thread-safe.
RealFft& fft_for(std::size_t n) {
  thread_local std::map<std::size_t, RealFft> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, RealFft(n)).first;
  }
  return it->second;
}

}  // namespace

const std::vector<double>& hann_window(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    }
    it = cache.emplace(n, std::move(w)).first;
  }
  return it->second;
}

std::string to_string(TuningAxis axis) {
  return axis == TuningAxis::Linear ? "linear" : "log_cents";
}

TuningAxis tuning_axis_from_string(const std::string& s) {
  if (s == "linear") return TuningAxis::Linear;
  if (s == "log_cents") return TuningAxis::LogCents;
  throw ValidationError("unknown tuning axis \"" + s + "\"");
}

void FrameSeries::copy_windowed(std::size_t i, std::span<double> out) const {
  if (i >= n_frames || out.size() != frame_len) {
    throw InvalidParams("frame index or buffer size out of range");
  }
  const auto& w = hann_window(frame_len);
  const double* src = clip->samples.data() + i * hop;
  for (std::size_t k = 0; k < frame_len; ++k) {
    out[k] = src[k] * w[k];
  }
}

FrameSeries frame_signal(const AudioClip& clip) {
  if (clip.samples.size() < kFrameLen) {
    throw TooShort("clip \"" + clip.source_id + "\" has " +
                   std::to_string(clip.samples.size()) +
                   " samples, need at least " + std::to_string(kFrameLen));
  }
  FrameSeries fs;
  fs.clip = &clip;
  fs.n_frames = (clip.samples.size() - kFrameLen) / kHop + 1;
  fs.frame_rate = static_cast<double>(clip.sample_rate) / static_cast<double>(kHop);
  return fs;
}

MagnitudeSpectrum magnitude_spectrum(std::span<const double> frame,
                                     double sample_rate) {
  if (frame.size() != kFrameLen) {
    throw InvalidParams("frame length must be " + std::to_string(kFrameLen));
  }
  MagnitudeSpectrum spec;
  spec.bin_hz = sample_rate / static_cast<double>(kFrameLen);
  spec.magnitudes.resize(kFrameLen / 2 + 1);
  fft_for(kFrameLen).magnitudes(frame, spec.magnitudes);
  return spec;
}

void for_each_frame_spectrum(
    const AudioClip& clip,
    const std::function<void(std::size_t, const MagnitudeSpectrum&)>& cb) {
  const FrameSeries fs = frame_signal(clip);
  std::vector<double> frame(kFrameLen);
  MagnitudeSpectrum spec;
  spec.bin_hz = static_cast<double>(clip.sample_rate) / static_cast<double>(kFrameLen);
  spec.magnitudes.resize(kFrameLen / 2 + 1);
  RealFft& fft = fft_for(kFrameLen);
  for (std::size_t i = 0; i < fs.n_frames; ++i) {
    fs.copy_windowed(i, frame);
    fft.magnitudes(frame, spec.magnitudes);
    cb(i, spec);
  }
}

std::pair<std::size_t, std::size_t> tuning_band_bins(double bin_hz) {
  // Small tolerance keeps bins whose center sits exactly on a band edge.
  const auto k_lo = static_cast<std::size_t>(std::ceil(kTuningLoHz / bin_hz - 1e-9));
  const auto k_hi = static_cast<std::size_t>(std::floor(kTuningHiHz / bin_hz + 1e-9));
  return {k_lo, k_hi};
}

double TuningVector::freq_at(std::size_t i) const {
  if (axis == TuningAxis::Linear) {
    return static_cast<double>(first_bin + i) * bin_hz;
  }
  return kTuningLoHz * std::pow(2.0, (static_cast<double>(i) + 0.5) * 10.0 / 1200.0);
}

TuningVector tuning_vector(const AudioClip& clip, TuningAxis axis) {
  const double bin_hz = static_cast<double>(clip.sample_rate) / kFrameLen;
  detail::TuningAccumulator acc(bin_hz, kFrameLen / 2 + 1);
  for_each_frame_spectrum(clip, [&acc](std::size_t, const MagnitudeSpectrum& spec) {
    acc.add(spec);
  });
  return acc.finish(axis, clip.source_id);
}

}  // namespace gamsom
