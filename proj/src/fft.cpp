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

#include "gamsom/fft.hpp"

#include <cmath>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "gamsom/errors.hpp"

namespace gamsom {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Impl {
  std::size_t n = 0;
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan) fftw_destroy_plan(plan);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

RealFft::RealFft(std::size_t n) : impl_(std::make_unique<Impl>()) {
  if (n < 2) {
    throw InvalidParams("FFT size must be >= 2");
  }
  impl_->n = n;
  std::lock_guard<std::mutex> lock(plan_mutex());
  impl_->in = fftw_alloc_real(n);
  impl_->out = fftw_alloc_complex(n / 2 + 1);
  // ESTIMATE keeps planning a pure function of (n, alignment): identical
  // inputs give bit-identical outputs across runs.
  impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->in, impl_->out,
                                     FFTW_ESTIMATE);
  if (!impl_->plan) {
    throw Error("FFTW plan creation failed");
  }
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::size_t RealFft::size() const { return impl_->n; }
std::size_t RealFft::bins() const { return impl_->n / 2 + 1; }

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() != impl_->n || out.size() != bins()) {
    throw DimMismatch("FFT buffer size mismatch");
  }
  std::memcpy(impl_->in, in.data(), impl_->n * sizeof(double));
  fftw_execute(impl_->plan);
  for (std::size_t k = 0; k < bins(); ++k) {
    out[k] = {impl_->out[k][0], impl_->out[k][1]};
  }
}

void RealFft::magnitudes(std::span<const double> in, std::span<double> out) {
  if (in.size() != impl_->n || out.size() != bins()) {
    throw DimMismatch("FFT buffer size mismatch");
  }
  std::memcpy(impl_->in, in.data(), impl_->n * sizeof(double));
  fftw_execute(impl_->plan);
  for (std::size_t k = 0; k < bins(); ++k) {
    out[k] = std::hypot(impl_->out[k][0], impl_->out[k][1]);
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace gamsom
