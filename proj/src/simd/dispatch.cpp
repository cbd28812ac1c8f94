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

#include <cassert>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace mdstream::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels& select() {
  const char* forced = std::getenv("MDSTREAM_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels* avx2_kernels() {
#ifdef MDSTREAM_HAVE_AVX2
  static const bool supported = cpu_has_avx2();
  return supported ? detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() {
  static const Kernels& table = select();
  return table;
}

void load_be_f32(std::span<const std::byte> src, std::span<float> dst) {
  assert(src.size() >= 4 * dst.size());
  active().load_be_f32(src.data(), dst.data(), dst.size());
}

void widen_scale(std::span<const float> src, std::span<double> dst, double scale) {
  assert(src.size() == dst.size());
  active().widen_scale(src.data(), dst.data(), dst.size(), scale);
}

void narrow(std::span<const double> src, std::span<float> dst) {
  assert(src.size() == dst.size());
  active().narrow(src.data(), dst.data(), dst.size());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().sum_sq_diff(a.data(), b.data(), a.size());
}

}  // namespace mdstream::simd
