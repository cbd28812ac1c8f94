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

#include <immintrin.h>

#include <bit>
#include <cstring>

#include "kernels_impl.hpp"

// Built with -mavx2 -mfma -ffp-contract=off. Only reached through the
// dispatch table after a CPUID check.

namespace mdstream::simd {
namespace {

void load_be_f32(const std::byte* src, float* dst, std::size_t n) {
  const __m256i swap = _mm256_setr_epi8(3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8, 15, 14, 13, 12,
                                        3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8, 15, 14, 13, 12);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + 4 * i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_shuffle_epi8(v, swap));
  }
  for (; i < n; ++i) {
    std::uint32_t u;
    std::memcpy(&u, src + 4 * i, 4);
    dst[i] = std::bit_cast<float>(__builtin_bswap32(u));
  }
}

void widen_scale(const float* src, double* dst, std::size_t n, double scale) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_cvtps_pd(_mm_loadu_ps(src + i));
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(v, s));
  }
  for (; i < n; ++i) dst[i] = static_cast<double>(src[i]) * scale;
}

void dequantize(const std::int32_t* src, double* dst, std::size_t n, float inv_precision,
                double scale) {
  const __m256 inv = _mm256_set1_ps(inv_precision);
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i q = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    const __m256 nm = _mm256_mul_ps(_mm256_cvtepi32_ps(q), inv);
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(nm)), s));
    _mm256_storeu_pd(dst + i + 4, _mm256_mul_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(nm, 1)), s));
  }
  for (; i < n; ++i) {
    const float nm = static_cast<float>(src[i]) * inv_precision;
    dst[i] = static_cast<double>(nm) * scale;
  }
}

void narrow(const double* src, float* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm_storeu_ps(dst + i, _mm256_cvtpd_ps(_mm256_loadu_pd(src + i)));
  for (; i < n; ++i) dst[i] = static_cast<float>(src[i]);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void interleave_xyz(const float* x, const float* y, const float* z, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d X = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
    const __m256d Y = _mm256_cvtps_pd(_mm_loadu_ps(y + i));
    const __m256d Z = _mm256_cvtps_pd(_mm_loadu_ps(z + i));
    // [x0 y0 z0 x1]
    __m256d o0 = _mm256_permute4x64_pd(X, _MM_SHUFFLE(1, 0, 0, 0));
    o0 = _mm256_blend_pd(o0, _mm256_permute4x64_pd(Y, _MM_SHUFFLE(0, 0, 0, 0)), 0b0010);
    o0 = _mm256_blend_pd(o0, _mm256_permute4x64_pd(Z, _MM_SHUFFLE(0, 0, 0, 0)), 0b0100);
    // [y1 z1 x2 y2]
    __m256d o1 = _mm256_permute4x64_pd(Y, _MM_SHUFFLE(2, 1, 1, 1));
    o1 = _mm256_blend_pd(o1, _mm256_permute4x64_pd(X, _MM_SHUFFLE(2, 2, 2, 2)), 0b0100);
    o1 = _mm256_blend_pd(o1, _mm256_permute4x64_pd(Z, _MM_SHUFFLE(1, 1, 1, 1)), 0b0010);
    // [z2 x3 y3 z3]
    __m256d o2 = _mm256_permute4x64_pd(Z, _MM_SHUFFLE(3, 3, 3, 2));
    o2 = _mm256_blend_pd(o2, _mm256_permute4x64_pd(X, _MM_SHUFFLE(3, 3, 3, 3)), 0b0010);
    o2 = _mm256_blend_pd(o2, _mm256_permute4x64_pd(Y, _MM_SHUFFLE(3, 3, 3, 3)), 0b0100);
    _mm256_storeu_pd(out + 3 * i, o0);
    _mm256_storeu_pd(out + 3 * i + 4, o1);
    _mm256_storeu_pd(out + 3 * i + 8, o2);
  }
  for (; i < n; ++i) {
    out[3 * i] = x[i];
    out[3 * i + 1] = y[i];
    out[3 * i + 2] = z[i];
  }
}

}  // namespace

namespace detail {

const Kernels* avx2_table() {
  static constexpr Kernels kTable{"avx2", load_be_f32, widen_scale, dequantize,
                                  narrow, sum_sq_diff, interleave_xyz};
  return &kTable;
}

}  // namespace detail
}  // namespace mdstream::simd
