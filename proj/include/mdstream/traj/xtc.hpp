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
#include <cstdint>
#include <span>
#include <vector>

#include "mdstream/core/model.hpp"
#include "mdstream/traj/byte_source.hpp"
#include "mdstream/traj/frame_index.hpp"

// GROMACS XTC: XDR (big-endian) frames of
//   int magic=1995, int natoms, int step, float time, float box[9],
//   int natoms (again), then either 3*natoms floats (natoms <= 9) or the
//   compressed block: float precision, int minint[3], int maxint[3],
//   int smallidx, int nbytes, nbytes of packed bits padded to 4.
// Lengths are nm and ps on disk; frames are returned in Å.

namespace mdstream::xtc {

inline constexpr std::int32_t kMagic = 1995;
inline constexpr double kNmToAngstrom = 10.0;

// The reference table of base sizes for the small-integer run encoding.
inline constexpr std::array<int, 73> kMagicInts{
    0,       0,       0,       0,       0,       0,       0,       0,       0,       8,
    10,      12,      16,      20,      25,      32,      40,      50,      64,      80,
    101,     128,     161,     203,     256,     322,     406,     512,     645,     812,
    1024,    1290,    1625,    2048,    2580,    3250,    4096,    5060,    6501,    8192,
    10321,   13003,   16384,   20642,   26007,   32768,   41285,   52015,   65536,   82570,
    104031,  131072,  165140,  208063,  262144,  330280,  416127,  524287,  660561,  832255,
    1048576, 1321122, 1664510, 2097152, 2642245, 3329021, 4194304, 5284491, 6658042, 8388607,
    10568983, 13316085, 16777216};
inline constexpr int kFirstIdx = 9;

struct FrameHeader {
  std::int32_t natoms = 0;
  std::int32_t step = 0;
  float time = 0;
  std::array<float, 9> box{};
  std::uint64_t length = 0;  // total bytes of this frame on disk
};

// Reads the header at `offset` and sizes the frame without decoding
// coordinates. Throws kCorrupt on a bad magic (with offset) or inconsistent
// header and kOutOfRange when the header itself runs past the end of data.
FrameHeader read_header(const ByteSource& src, std::uint64_t offset);

ScanResult scan(const ByteSource& src);

// Decodes one complete frame record.
Frame decode_frame(std::span<const std::byte> bytes, std::int64_t frame_number);

Frame read_frame(const ByteSource& src, const FrameIndex& index, std::size_t i);

// Front-to-back parse of every complete frame, ignoring any index.
std::vector<Frame> read_sequential(const ByteSource& src);

// Quantised integers of a compressed frame, in output atom order. Empty for
// the uncompressed branch.
struct QuantizedFrame {
  float precision = 0;
  std::vector<std::int32_t> ints;
};
QuantizedFrame decode_quantized(std::span<const std::byte> bytes);

}  // namespace mdstream::xtc
