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

#include "mdstream/traj/xtc.hpp"

#include <algorithm>
#include <string>

#include "endian.hpp"
#include "mdstream/core/error.hpp"
#include "mdstream/simd/kernels.hpp"

namespace mdstream::xtc {
namespace {

using detail::Cursor;

constexpr std::size_t kHeaderBytes = 4 * (1 + 1 + 1 + 1 + 9 + 1);
constexpr std::size_t kCompressedPrefix = 4 * (1 + 3 + 3 + 1 + 1);

std::uint64_t pad4(std::uint64_t n) { return (n + 3) & ~std::uint64_t{3}; }

[[noreturn]] void corrupt(std::uint64_t offset, const std::string& what) {
  fail(ErrorCode::kCorrupt, "xtc: " + what + " at offset " + std::to_string(offset));
}

// Smallest bit count representing `size`.
int size_of_int(std::uint32_t size) {
  std::uint64_t num = 1;
  int bits = 0;
  while (size >= num && bits < 32) {
    ++bits;
    num <<= 1;
  }
  return bits;
}

// Bits needed for the mixed-radix product of `sizes`.
int size_of_ints(const std::uint32_t (&sizes)[3]) {
  std::uint32_t bytes[32];
  std::uint32_t num_of_bytes = 1;
  bytes[0] = 1;
  for (std::uint32_t size : sizes) {
    std::uint32_t tmp = 0;
    std::uint32_t bytecnt = 0;
    for (; bytecnt < num_of_bytes; ++bytecnt) {
      tmp = bytes[bytecnt] * size + tmp;
      bytes[bytecnt] = tmp & 0xff;
      tmp >>= 8;
    }
    while (tmp != 0) {
      bytes[bytecnt++] = tmp & 0xff;
      tmp >>= 8;
    }
    num_of_bytes = bytecnt;
  }
  int bits = 0;
  std::uint32_t num = 1;
  --num_of_bytes;
  while (bytes[num_of_bytes] >= num) {
    ++bits;
    num *= 2;
  }
  return bits + static_cast<int>(num_of_bytes) * 8;
}

// MSB-first bit stream with the reference decoder's carry state.
class BitReader {
 public:
  BitReader(std::span<const std::byte> bytes, std::uint64_t offset) : buf_(bytes), offset_(offset) {}

  std::uint32_t bits(int count) {
    const std::uint32_t mask = count >= 32 ? 0xffffffffu : (1u << count) - 1;
    std::uint32_t num = 0;
    while (count >= 8) {
      last_byte_ = (last_byte_ << 8) | next();
      num |= (last_byte_ >> last_bits_) << (count - 8);
      count -= 8;
    }
    if (count > 0) {
      if (static_cast<int>(last_bits_) < count) {
        last_bits_ += 8;
        last_byte_ = (last_byte_ << 8) | next();
      }
      last_bits_ -= count;
      num |= (last_byte_ >> last_bits_) & ((1u << count) - 1);
    }
    return num & mask;
  }

  void ints(int num_of_bits, const std::uint32_t (&sizes)[3], std::int32_t (&nums)[3]) {
    std::uint32_t bytes[32] = {};
    int num_of_bytes = 0;
    while (num_of_bits > 8) {
      bytes[num_of_bytes++] = bits(8);
      num_of_bits -= 8;
    }
    if (num_of_bits > 0) bytes[num_of_bytes++] = bits(num_of_bits);
    for (int i = 2; i > 0; --i) {
      std::uint32_t num = 0;
      for (int j = num_of_bytes - 1; j >= 0; --j) {
        num = (num << 8) | bytes[j];
        const std::uint32_t p = num / sizes[i];
        bytes[j] = p;
        num -= p * sizes[i];
      }
      nums[i] = static_cast<std::int32_t>(num);
    }
    nums[0] = static_cast<std::int32_t>(bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) | (bytes[3] << 24));
  }

 private:
  std::uint32_t next() {
    if (pos_ >= buf_.size()) corrupt(offset_, "compressed coordinates overrun their byte count");
    return std::to_integer<std::uint32_t>(buf_[pos_++]);
  }

  std::span<const std::byte> buf_;
  std::uint64_t offset_;
  std::size_t pos_ = 0;
  std::uint32_t last_bits_ = 0;
  std::uint32_t last_byte_ = 0;
};

struct ParsedHeader {
  FrameHeader header;
  Cursor body;  // positioned after the repeated natoms word
};

ParsedHeader parse_header(std::span<const std::byte> bytes, std::uint64_t offset) {
  Cursor cur(bytes, std::endian::big, offset);
  FrameHeader h;
  const auto magic = cur.get<std::int32_t>();
  if (magic != kMagic) corrupt(offset, "bad magic " + std::to_string(magic));
  h.natoms = cur.get<std::int32_t>();
  h.step = cur.get<std::int32_t>();
  h.time = cur.get<float>();
  for (float& b : h.box) b = cur.get<float>();
  const auto lsize = cur.get<std::int32_t>();
  if (h.natoms <= 0) corrupt(offset, "non-positive atom count");
  if (lsize != h.natoms) corrupt(offset, "coordinate count disagrees with header atom count");
  return {h, cur};
}

void fill_box(Frame& frame, const std::array<float, 9>& box) {
  for (std::size_t k = 0; k < 9; ++k) frame.box[k] = static_cast<double>(box[k]) * kNmToAngstrom;
}

// Decodes the compressed block into quantised integers. `cur` is positioned at
// the precision word.
QuantizedFrame decode_ints(Cursor& cur, std::size_t natoms) {
  const std::uint64_t base = cur.file_offset();
  QuantizedFrame out;
  out.precision = cur.get<float>();
  std::int32_t minint[3], maxint[3];
  for (auto& v : minint) v = cur.get<std::int32_t>();
  for (auto& v : maxint) v = cur.get<std::int32_t>();
  int smallidx = cur.get<std::int32_t>();
  const auto nbytes = cur.get<std::int32_t>();
  if (nbytes < 0 || static_cast<std::size_t>(nbytes) > cur.remaining()) {
    corrupt(base, "compressed byte count exceeds the available data");
  }
  BitReader bits(cur.take(static_cast<std::size_t>(nbytes)), cur.file_offset());
  cur.skip(std::min<std::size_t>(pad4(nbytes) - nbytes, cur.remaining()));

  std::uint32_t sizeint[3];
  for (int k = 0; k < 3; ++k) {
    sizeint[k] = static_cast<std::uint32_t>(maxint[k]) - static_cast<std::uint32_t>(minint[k]) + 1;
    if (sizeint[k] == 0) corrupt(base, "degenerate coordinate range");
  }
  int bitsizeint[3] = {0, 0, 0};
  int bitsize = 0;
  if ((sizeint[0] | sizeint[1] | sizeint[2]) > 0xffffff) {
    for (int k = 0; k < 3; ++k) bitsizeint[k] = size_of_int(sizeint[k]);
  } else {
    bitsize = size_of_ints(sizeint);
  }

  const int last_idx = static_cast<int>(kMagicInts.size());
  auto check_idx = [&](int idx) {
    if (idx < kFirstIdx || idx >= last_idx) corrupt(base, "small-integer index out of range");
  };
  check_idx(smallidx);
  int smaller = kMagicInts[std::max(kFirstIdx, smallidx - 1)] / 2;
  int smallnum = kMagicInts[smallidx] / 2;
  std::uint32_t sizesmall[3];
  std::fill(std::begin(sizesmall), std::end(sizesmall), static_cast<std::uint32_t>(kMagicInts[smallidx]));

  out.ints.resize(3 * natoms);
  std::int32_t* emit = out.ints.data();
  auto put = [&emit](const std::int32_t (&v)[3]) {
    emit[0] = v[0];
    emit[1] = v[1];
    emit[2] = v[2];
    emit += 3;
  };

  std::size_t i = 0;
  int run = 0;  // carries over when the run flag bit is 0
  while (i < natoms) {
    std::int32_t cur_coord[3];
    if (bitsize == 0) {
      for (int k = 0; k < 3; ++k) cur_coord[k] = static_cast<std::int32_t>(bits.bits(bitsizeint[k]));
    } else {
      bits.ints(bitsize, sizeint, cur_coord);
    }
    ++i;
    for (int k = 0; k < 3; ++k) cur_coord[k] += minint[k];
    std::int32_t prev[3] = {cur_coord[0], cur_coord[1], cur_coord[2]};

    int is_smaller = 0;
    if (bits.bits(1) == 1) {
      run = static_cast<int>(bits.bits(5));
      is_smaller = run % 3;
      run -= is_smaller;
      --is_smaller;
    }
    if (run > 0) {
      if (i + static_cast<std::size_t>(run / 3) > natoms) corrupt(base, "run exceeds atom count");
      for (int k = 0; k < run; k += 3) {
        std::int32_t t[3];
        bits.ints(smallidx, sizesmall, t);
        ++i;
        for (int d = 0; d < 3; ++d) t[d] += prev[d] - smallnum;
        if (k == 0) {
          // First two atoms of a run are stored swapped (water molecules
          // compress better that way).
          std::swap(t, prev);
          put(prev);
        } else {
          std::copy(std::begin(t), std::end(t), std::begin(prev));
        }
        put(t);
      }
    } else {
      put(cur_coord);
    }

    smallidx += is_smaller;
    check_idx(smallidx);
    if (is_smaller < 0) {
      smallnum = smaller;
      smaller = smallidx > kFirstIdx ? kMagicInts[smallidx - 1] / 2 : 0;
    } else if (is_smaller > 0) {
      smaller = smallnum;
      smallnum = kMagicInts[smallidx] / 2;
    }
    std::fill(std::begin(sizesmall), std::end(sizesmall), static_cast<std::uint32_t>(kMagicInts[smallidx]));
  }
  return out;
}

}  // namespace

FrameHeader read_header(const ByteSource& src, std::uint64_t offset) {
  std::byte buf[kHeaderBytes + kCompressedPrefix];
  const std::size_t got = src.read_at(offset, buf);
  if (got < kHeaderBytes) {
    fail(ErrorCode::kOutOfRange, "xtc: incomplete frame header at offset " + std::to_string(offset));
  }
  ParsedHeader p = parse_header(std::span(buf, got), offset);
  FrameHeader h = p.header;
  if (h.natoms <= 9) {
    h.length = kHeaderBytes + 12ull * static_cast<std::uint64_t>(h.natoms);
  } else {
    if (got < kHeaderBytes + kCompressedPrefix) {
      fail(ErrorCode::kOutOfRange, "xtc: incomplete compressed header at offset " + std::to_string(offset));
    }
    p.body.skip(kCompressedPrefix - 4);
    const auto nbytes = p.body.get<std::int32_t>();
    if (nbytes < 0) corrupt(offset, "negative compressed byte count");
    h.length = kHeaderBytes + kCompressedPrefix + pad4(static_cast<std::uint64_t>(nbytes));
  }
  return h;
}

ScanResult scan(const ByteSource& src) {
  ScanResult result;
  result.meta.format = TrajectoryFormat::kXtc;
  result.meta.file_size = src.size();
  std::uint64_t offset = 0;
  std::optional<float> first_time;
  while (offset < src.size()) {
    FrameHeader h;
    try {
      h = read_header(src, offset);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOutOfRange) throw;
      result.truncated = true;
      break;
    }
    if (offset + h.length > src.size()) {
      result.truncated = true;
      break;
    }
    if (result.index.size() == 0) {
      result.meta.n_atoms = static_cast<std::size_t>(h.natoms);
      first_time = h.time;
    } else if (static_cast<std::size_t>(h.natoms) != result.meta.n_atoms) {
      corrupt(offset, "atom count changes from " + std::to_string(result.meta.n_atoms) + " to " +
                          std::to_string(h.natoms));
    }
    if (result.index.size() == 1) result.meta.timestep_ps = static_cast<double>(h.time) - *first_time;
    result.index.push_back(offset, h.length);
    offset += h.length;
  }
  if (result.index.size() == 0) fail(ErrorCode::kCorrupt, "xtc: no complete frames");
  result.meta.n_frames = result.index.size();
  return result;
}

Frame decode_frame(std::span<const std::byte> bytes, std::int64_t frame_number) {
  ParsedHeader p = parse_header(bytes, 0);
  const auto natoms = static_cast<std::size_t>(p.header.natoms);
  Frame frame;
  frame.frame_number = frame_number;
  frame.time_ps = p.header.time;
  fill_box(frame, p.header.box);
  frame.coords = Coords(natoms);
  std::span<double> out = frame.coords.flat();
  if (natoms <= 9) {
    std::vector<float> nm(3 * natoms);
    simd::load_be_f32(p.body.take(12 * natoms), nm);
    simd::widen_scale(nm, out, kNmToAngstrom);
  } else {
    const QuantizedFrame q = decode_ints(p.body, natoms);
    if (!(q.precision > 0)) corrupt(0, "non-positive precision");
    const auto inv_precision = static_cast<float>(1.0 / static_cast<double>(q.precision));
    simd::active().dequantize(q.ints.data(), out.data(), out.size(), inv_precision, kNmToAngstrom);
  }
  return frame;
}

QuantizedFrame decode_quantized(std::span<const std::byte> bytes) {
  ParsedHeader p = parse_header(bytes, 0);
  if (p.header.natoms <= 9) return {};
  return decode_ints(p.body, static_cast<std::size_t>(p.header.natoms));
}

Frame read_frame(const ByteSource& src, const FrameIndex& index, std::size_t i) {
  if (i >= index.size()) {
    fail(ErrorCode::kOutOfRange,
         "frame " + std::to_string(i) + " out of range (" + std::to_string(index.size()) + " frames)");
  }
  const auto bytes = src.read_vector(index.offsets[i], index.lengths[i]);
  try {
    return decode_frame(bytes, static_cast<std::int64_t>(i));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kCorrupt) throw;
    fail(ErrorCode::kCorrupt, std::string(e.what()) + " (frame " + std::to_string(i) +
                                  " starting at file offset " + std::to_string(index.offsets[i]) + ")");
  }
}

std::vector<Frame> read_sequential(const ByteSource& src) {
  const auto all = src.read_vector(0, src.size());
  std::span<const std::byte> rest(all);
  std::vector<Frame> frames;
  while (rest.size() >= kHeaderBytes) {
    Cursor peek(rest, std::endian::big);
    peek.skip(4);
    const auto natoms = peek.get<std::int32_t>();
    std::size_t length = kHeaderBytes + 12 * static_cast<std::size_t>(std::max(natoms, 0));
    if (natoms > 9) {
      if (rest.size() < kHeaderBytes + kCompressedPrefix) break;
      peek.skip(kHeaderBytes + kCompressedPrefix - 4 - 8);
      length = kHeaderBytes + kCompressedPrefix +
               pad4(static_cast<std::uint32_t>(peek.get<std::int32_t>()));
    }
    if (length > rest.size()) break;
    frames.push_back(decode_frame(rest.first(length), static_cast<std::int64_t>(frames.size())));
    rest = rest.subspan(length);
  }
  return frames;
}

}  // namespace mdstream::xtc
