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

#include "gamsom/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "gamsom/errors.hpp"

namespace gamsom {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

WavContent read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open WAV file: " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path.string());
  }

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  std::size_t data_off = 0;
  std::size_t data_len = 0;

  // Chunk walk; unknown chunks are skipped, sizes padded to even.
  std::size_t off = 12;
  while (off + 8 <= size) {
    const std::uint32_t ck_size = read_u32(p + off + 4);
    const char* ck_id = reinterpret_cast<const char*>(p + off);
    const std::size_t body = off + 8;
    if (body + ck_size > size) {
      throw IoError("truncated WAV chunk: " + path.string());
    }
    if (std::memcmp(ck_id, "fmt ", 4) == 0) {
      if (ck_size < 16) throw IoError("short fmt chunk: " + path.string());
      format = read_u16(p + body);
      channels = read_u16(p + body + 2);
      sample_rate = read_u32(p + body + 4);
      bits = read_u16(p + body + 14);
      if (format == kFormatExtensible) {
        if (ck_size < 40) throw IoError("short extensible fmt chunk: " + path.string());
        format = read_u16(p + body + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(ck_id, "data", 4) == 0) {
      data_off = body;
      data_len = ck_size;
    }
    off = body + ck_size + (ck_size & 1);
  }

  if (!have_fmt || data_off == 0) {
    throw IoError("WAV missing fmt or data chunk: " + path.string());
  }
  if (format != kFormatPcm && format != kFormatFloat) {
    throw UnsupportedFormat("WAV codec " + std::to_string(format) +
                            " not supported (PCM or float only): " + path.string());
  }
  if (channels < 1 || channels > 2) {
    throw UnsupportedFormat("WAV with " + std::to_string(channels) +
                            " channels not supported: " + path.string());
  }
  if (sample_rate == 0) {
    throw IoError("WAV sample rate is zero: " + path.string());
  }

  std::size_t bytes_per_sample = 0;
  if (format == kFormatPcm && bits == 16) {
    bytes_per_sample = 2;
  } else if (format == kFormatPcm && bits == 24) {
    bytes_per_sample = 3;
  } else if (format == kFormatFloat && bits == 32) {
    bytes_per_sample = 4;
  } else {
    throw UnsupportedFormat("WAV sample format " + std::to_string(bits) + "-bit/" +
                            (format == kFormatFloat ? "float" : "int") +
                            " not supported: " + path.string());
  }

  const std::size_t n_samples = data_len / bytes_per_sample;
  const std::size_t n_frames = n_samples / channels;

  WavContent out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.channels = channels;
  out.samples.resize(n_frames * channels);

  const unsigned char* d = p + data_off;
  if (format == kFormatPcm && bits == 16) {
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      const std::int16_t v = static_cast<std::int16_t>(d[2 * i] | (d[2 * i + 1] << 8));
      out.samples[i] = v / 32768.0;
    }
  } else if (format == kFormatPcm && bits == 24) {
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      std::int32_t v = d[3 * i] | (d[3 * i + 1] << 8) | (d[3 * i + 2] << 16);
      if (v & 0x800000) v |= ~0xFFFFFF;  // sign extend
      out.samples[i] = v / 8388608.0;
    }
  } else {
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      std::uint32_t u = read_u32(d + 4 * i);
      float f;
      std::memcpy(&f, &u, 4);
      if (!std::isfinite(f)) {
        throw IoError("non-finite sample in float WAV: " + path.string());
      }
      out.samples[i] = std::clamp(static_cast<double>(f), -1.0, 1.0);
    }
  }
  return out;
}

void write_wav_f32_mono(const std::filesystem::path& path,
                        std::span<const double> samples, int sample_rate) {
  if (sample_rate <= 0) {
    throw InvalidParams("WAV sample rate must be positive");
  }
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 4);

  std::string out;
  out.reserve(58 + data_bytes);
  out += "RIFF";
  // RIFF size = "WAVE"(4) + fmt(8+16) + fact(8+4) + data header(8) + data
  put_u32(out, 48 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, kFormatFloat);
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate) * 4);
  put_u16(out, 4);
  put_u16(out, 32);
  out += "fact";
  put_u32(out, 4);
  put_u32(out, static_cast<std::uint32_t>(samples.size()));
  out += "data";
  put_u32(out, data_bytes);

  for (const double x : samples) {
    const float f = static_cast<float>(x);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    put_u32(out, u);
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw IoError("cannot open WAV for writing: " + path.string());
  }
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) {
    throw IoError("WAV write failed: " + path.string());
  }
}

}  // namespace gamsom
