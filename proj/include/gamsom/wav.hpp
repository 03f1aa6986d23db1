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

#ifndef GAMSOM_WAV_HPP
#define GAMSOM_WAV_HPP

#include <filesystem>
#include <span>
#include <vector>

namespace gamsom {

/// Raw decoded WAV content. Samples are interleaved, already scaled to
/// [-1, 1] (integer formats divided by full scale, float passed through
/// and clamped).
struct WavContent {
  int sample_rate = 0;
  int channels = 0;
  std::vector<double> samples;  // interleaved, frames * channels

  std::size_t frame_count() const {
    return channels > 0 ? samples.size() / static_cast<std::size_t>(channels) : 0;
  }
};

/// Reads a PCM WAV file: 16/24-bit integer or 32-bit float, 1 or 2 channels.
/// Throws IoError on unreadable/corrupt files, UnsupportedFormat on
/// compressed codecs or unsupported layouts.
WavContent read_wav(const std::filesystem::path& path);

/// Writes mono 32-bit float WAV. Values are stored as float(x), so a
/// decode of the written file reproduces float-representable inputs
/// bit-exactly.
void write_wav_f32_mono(const std::filesystem::path& path,
                        std::span<const double> samples, int sample_rate);

}  // namespace gamsom

#endif  // GAMSOM_WAV_HPP
