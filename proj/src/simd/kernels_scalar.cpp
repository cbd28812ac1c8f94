// Copyright 2026 the mdstream authors
//
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

#include <bit>
#include <cstring>

#include "kernels_impl.hpp"

namespace mdstream::simd {
namespace {

void load_be_f32(const std::byte* src, float* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t u;
    std::memcpy(&u, src + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::little) u = __builtin_bswap32(u);
    dst[i] = std::bit_cast<float>(u);
  }
}

void widen_scale(const float* src, double* dst, std::size_t n, double scale) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<double>(src[i]) * scale;
}

void dequantize(const std::int32_t* src, double* dst, std::size_t n, float inv_precision,
                double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    const float nm = static_cast<float>(src[i]) * inv_precision;
    dst[i] = static_cast<double>(nm) * scale;
  }
}

void narrow(const double* src, float* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<float>(src[i]);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void interleave_xyz(const float* x, const float* y, const float* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[3 * i] = x[i];
    out[3 * i + 1] = y[i];
    out[3 * i + 2] = z[i];
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static constexpr Kernels kTable{"scalar", load_be_f32, widen_scale, dequantize,
                                  narrow,   sum_sq_diff, interleave_xyz};
  return kTable;
}

}  // namespace mdstream::simd
