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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops used by the trajectory readers, the wire encoder
// and RMSD. Each kernel has a scalar reference and, where the build and CPU
// allow it, an AVX2 variant; the active table is picked once at first use.
//
// All kernels except sum_sq_diff are bit-identical across variants.
// sum_sq_diff reassociates the sum and agrees to rounding only.

namespace mdstream::simd {

struct Kernels {
  std::string_view name;

  // dst[i] = IEEE float decoded from big-endian bytes src[4i, 4i+4).
  void (*load_be_f32)(const std::byte* src, float* dst, std::size_t n);
  // dst[i] = double(src[i]) * scale.
  void (*widen_scale)(const float* src, double* dst, std::size_t n, double scale);
  // dst[i] = double(float(src[i]) * inv_precision) * scale, the XTC
  // dequantization step evaluated in single precision like the reference.
  void (*dequantize)(const std::int32_t* src, double* dst, std::size_t n, float inv_precision,
                     double scale);
  // dst[i] = float(src[i]), round to nearest.
  void (*narrow)(const double* src, float* dst, std::size_t n);
  // Sum over i of (a[i] - b[i])^2.
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // out = x0 y0 z0 x1 y1 z1 ... widened to double.
  void (*interleave_xyz)(const float* x, const float* y, const float* z, double* out,
                         std::size_t n);
};

const Kernels& scalar_kernels();
// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const Kernels* avx2_kernels();

// Selected table. MDSTREAM_SIMD=scalar in the environment forces the scalar one.
const Kernels& active();

// Span conveniences over the active table.
void load_be_f32(std::span<const std::byte> src, std::span<float> dst);
void widen_scale(std::span<const float> src, std::span<double> dst, double scale);
void narrow(std::span<const double> src, std::span<float> dst);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);

}  // namespace mdstream::simd
