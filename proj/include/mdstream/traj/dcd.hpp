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
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdstream/core/model.hpp"
#include "mdstream/traj/byte_source.hpp"
#include "mdstream/traj/frame_index.hpp"

// CHARMM/NAMD DCD built from Fortran records (int32 length, payload, int32
// length). Header: 84-byte "CORD" + 20 int32 control words, a title record and
// an atom-count record. Each frame: optional 6-double unit cell
// (A, gamma, B, beta, alpha, C), then X, Y, Z float records (Å), plus a W
// record for 4D files.

namespace mdstream::dcd {

// AKMA time unit in picoseconds.
inline constexpr double kAkmaPs = 0.0488882129;

struct Layout {
  std::endian order = std::endian::little;
  std::size_t natoms = 0;
  std::int32_t declared_frames = 0;  // icntrl[0]
  std::int32_t nsavc = 0;
  bool charmm = false;
  bool has_unit_cell = false;
  bool has_4d = false;
  std::optional<double> timestep_ps;
  std::uint64_t header_bytes = 0;
  std::uint64_t frame_bytes = 0;
};

// Parses and validates the header records; throws kUnsupportedFormat for a
// first marker other than 84, a tag other than CORD, or fixed atoms.
Layout read_layout(const ByteSource& src);

ScanResult scan(const ByteSource& src);

// Box rows (Å) from CHARMM unit-cell values. Angle entries inside [-1, 1]
// are read as cosines, as NAMD writes them.
Box box_from_unit_cell(const std::array<double, 6>& cell);

Frame decode_frame(const Layout& layout, std::span<const std::byte> bytes, std::int64_t frame_number,
                   std::uint64_t file_offset = 0);

Frame read_frame(const ByteSource& src, const Layout& layout, const FrameIndex& index, std::size_t i);

// Walks every record marker front to back, ignoring the declared frame count.
std::vector<Frame> read_sequential(const ByteSource& src);

}  // namespace mdstream::dcd
