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

#ifndef GAMSOM_FFT_HPP
#define GAMSOM_FFT_HPP

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace gamsom {

/// Real-to-complex FFT of a fixed size, backed by FFTW (ESTIMATE plans,
/// so results are a pure function of the input). Instances are not
/// thread-safe; use one per thread. Plan creation/destruction is
/// internally serialized.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();

  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const;
  std::size_t bins() const;  // n/2 + 1

  /// Forward transform; out must have bins() elements.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);

  /// Forward transform returning bin magnitudes; out must have bins() elements.
  void magnitudes(std::span<const double> in, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::size_t next_pow2(std::size_t n);

}  // namespace gamsom

#endif  // GAMSOM_FFT_HPP
