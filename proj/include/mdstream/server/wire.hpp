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

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdstream/core/model.hpp"

namespace mdstream::server {

// Frame payload, little-endian throughout:
//   f32 time_ps, 9 x f32 box (Å, row-major), i32 n_coords, 3*n_coords x f32 (Å).
inline constexpr int kWireVersion = 1;
inline constexpr std::size_t kWireHeaderBytes = 4 * (1 + 9 + 1);

std::size_t payload_size(std::size_t n_coords);

// Whole frame.
std::string encode_frame(const Frame& frame);
// Only the atoms in `atoms` (already bounds-checked).
std::string encode_frame(const Frame& frame, const Selection& atoms);
// Cuts a subset out of a full payload without re-narrowing.
std::string subset_payload(std::string_view full, const Selection& atoms);

struct WireFrame {
  float time_ps = 0;
  std::array<float, 9> box{};
  std::vector<float> coords;

  std::size_t n_coords() const { return coords.size() / 3; }
};

// Throws kProtocol on a malformed payload.
WireFrame decode_payload(std::string_view payload);

// "0,4,7" -> Selection; throws kInvalidArgument unless the list is strictly
// ascending, non-empty and every index < n_atoms.
Selection parse_atom_list(std::string_view csv, std::size_t n_atoms);

}  // namespace mdstream::server
