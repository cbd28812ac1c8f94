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

#include "mdstream/traj/dcd.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "endian.hpp"
#include "mdstream/core/error.hpp"
#include "mdstream/simd/kernels.hpp"

namespace mdstream::dcd {
namespace {

using detail::Cursor;

constexpr std::int32_t kHeaderMarker = 84;

[[noreturn]] void corrupt_record(std::uint64_t offset, const std::string& what) {
  fail(ErrorCode::kCorrupt, "dcd: " + what + " at offset " + std::to_string(offset));
}

// Returns the record payload, checking both markers against `expected`
// when it is set.
std::span<const std::byte> record(Cursor& cur, std::optional<std::int32_t> expected = {}) {
  const std::uint64_t at = cur.file_offset();
  const auto len = cur.get<std::int32_t>();
  if (len < 0 || (expected && len != *expected)) {
    corrupt_record(at, "record length " + std::to_string(len) +
                           (expected ? " where " + std::to_string(*expected) + " was expected" : ""));
  }
  auto payload = cur.take(static_cast<std::size_t>(len));
  const std::uint64_t suffix_at = cur.file_offset();
  const auto suffix = cur.get<std::int32_t>();
  if (suffix != len) {
    corrupt_record(suffix_at, "record suffix " + std::to_string(suffix) + " does not match prefix " +
                                  std::to_string(len));
  }
  return payload;
}

void load_floats(std::span<const std::byte> bytes, std::endian order, std::span<float> out) {
  if (order == std::endian::native) {
    std::memcpy(out.data(), bytes.data(), 4 * out.size());
  } else if (order == std::endian::big) {
    simd::load_be_f32(bytes, out);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::load<float>(bytes.data() + 4 * i, order);
  }
}

double cell_angle_deg(double v) {
  if (v >= -1.0 && v <= 1.0) return 90.0 - std::asin(v) * 180.0 / std::numbers::pi;
  return v;
}

}  // namespace

Layout read_layout(const ByteSource& src) {
  std::byte first[4];
  if (src.read_at(0, first) != 4) fail(ErrorCode::kUnsupportedFormat, "dcd: file too short");
  Layout layout;
  if (detail::load<std::int32_t>(first, std::endian::little) == kHeaderMarker) {
    layout.order = std::endian::little;
  } else if (detail::load<std::int32_t>(first, std::endian::big) == kHeaderMarker) {
    layout.order = std::endian::big;
  } else {
    fail(ErrorCode::kUnsupportedFormat, "dcd: first record marker is not 84 in either byte order");
  }

  // Header records are small; 4 KiB covers 84 + a typical title + natoms.
  std::uint64_t want = std::min<std::uint64_t>(src.size(), 4096);
  std::vector<std::byte> head = src.read_vector(0, want);
  {
    Cursor probe(head, layout.order);
    probe.skip(4 + 84 + 4);
    const auto title_len = static_cast<std::uint64_t>(std::max(probe.get<std::int32_t>(), 0));
    const std::uint64_t need = 4 + 84 + 4 + 4 + title_len + 4 + 12;
    if (need > want && need <= src.size()) head = src.read_vector(0, need);
  }

  Cursor cur(head, layout.order);
  const auto hdr = record(cur, kHeaderMarker);
  if (std::memcmp(hdr.data(), "CORD", 4) != 0) {
    fail(ErrorCode::kUnsupportedFormat,
         "dcd: header tag '" + std::string(reinterpret_cast<const char*>(hdr.data()), 4) + "' is not CORD");
  }
  std::int32_t icntrl[20];
  for (int k = 0; k < 20; ++k) icntrl[k] = detail::load<std::int32_t>(hdr.data() + 4 + 4 * k, layout.order);
  layout.declared_frames = icntrl[0];
  layout.nsavc = icntrl[2];
  layout.charmm = icntrl[19] != 0;
  if (icntrl[8] != 0) fail(ErrorCode::kUnsupportedFormat, "dcd: fixed atoms are not supported");

  double delta = 0;
  if (layout.charmm) {
    delta = detail::load<float>(hdr.data() + 4 + 4 * 9, layout.order);
    layout.has_unit_cell = icntrl[10] != 0;
    layout.has_4d = icntrl[11] != 0;
  } else {
    delta = detail::load<double>(hdr.data() + 4 + 4 * 9, layout.order);
  }
  if (delta > 0 && std::isfinite(delta)) {
    layout.timestep_ps = delta * kAkmaPs * (layout.nsavc > 0 ? layout.nsavc : 1);
  }

  const auto title = record(cur);
  if (title.size() < 4) corrupt_record(cur.file_offset(), "title record too short");
  const auto natoms_rec = record(cur, 4);
  const auto natoms = detail::load<std::int32_t>(natoms_rec.data(), layout.order);
  if (natoms <= 0) corrupt_record(cur.file_offset() - 8, "non-positive atom count");
  layout.natoms = static_cast<std::size_t>(natoms);
  layout.header_bytes = cur.position();

  const std::uint64_t coord_record = 8 + 4 * layout.natoms;
  layout.frame_bytes = (layout.has_unit_cell ? 8 + 48 : 0) + coord_record * (layout.has_4d ? 4 : 3);
  return layout;
}

ScanResult scan(const ByteSource& src) {
  const Layout layout = read_layout(src);
  ScanResult result;
  result.meta.format = TrajectoryFormat::kDcd;
  result.meta.n_atoms = layout.natoms;
  result.meta.timestep_ps = layout.timestep_ps;
  result.meta.file_size = src.size();

  const std::uint64_t body = src.size() - layout.header_bytes;
  const std::uint64_t n = body / layout.frame_bytes;
  result.truncated = body % layout.frame_bytes != 0;
  if (n == 0) fail(ErrorCode::kCorrupt, "dcd: no complete frames");
  for (std::uint64_t i = 0; i < n; ++i) {
    result.index.push_back(layout.header_bytes + i * layout.frame_bytes, layout.frame_bytes);
  }
  // The first frame is decoded so that a wrong layout fails at scan time.
  (void)read_frame(src, layout, result.index, 0);
  result.meta.n_frames = result.index.size();
  return result;
}

Box box_from_unit_cell(const std::array<double, 6>& cell) {
  const double a = cell[0], b = cell[2], c = cell[5];
  const double gamma = cell_angle_deg(cell[1]);
  const double beta = cell_angle_deg(cell[3]);
  const double alpha = cell_angle_deg(cell[4]);
  auto cos_deg = [](double deg) { return deg == 90.0 ? 0.0 : std::cos(deg * std::numbers::pi / 180.0); };
  auto sin_deg = [](double deg) { return deg == 90.0 ? 1.0 : std::sin(deg * std::numbers::pi / 180.0); };
  const double cg = cos_deg(gamma), sg = sin_deg(gamma);
  const double cb = cos_deg(beta), ca = cos_deg(alpha);
  const double cx = cb;
  const double cy = sg != 0 ? (ca - cb * cg) / sg : 0.0;
  const double cz2 = 1.0 - cx * cx - cy * cy;
  const double cz = cz2 > 0 ? std::sqrt(cz2) : 0.0;
  return Box{a, 0, 0, b * cg, b * sg, 0, c * cx, c * cy, c * cz};
}

Frame decode_frame(const Layout& layout, std::span<const std::byte> bytes, std::int64_t frame_number,
                   std::uint64_t file_offset) {
  Cursor cur(bytes, layout.order, file_offset);
  Frame frame;
  frame.frame_number = frame_number;
  frame.time_ps = layout.timestep_ps ? static_cast<double>(frame_number) * *layout.timestep_ps
                                     : static_cast<double>(frame_number);
  if (layout.has_unit_cell) {
    const auto cell_bytes = record(cur, 48);
    std::array<double, 6> cell;
    for (int k = 0; k < 6; ++k) cell[k] = detail::load<double>(cell_bytes.data() + 8 * k, layout.order);
    frame.box = box_from_unit_cell(cell);
  }
  const auto n = layout.natoms;
  const auto expected = static_cast<std::int32_t>(4 * n);
  std::vector<float> xyz(3 * n);
  for (int axis = 0; axis < 3; ++axis) {
    load_floats(record(cur, expected), layout.order, std::span(xyz).subspan(axis * n, n));
  }
  if (layout.has_4d) record(cur, expected);
  frame.coords = Coords(n);
  simd::active().interleave_xyz(xyz.data(), xyz.data() + n, xyz.data() + 2 * n,
                                frame.coords.flat().data(), n);
  return frame;
}

Frame read_frame(const ByteSource& src, const Layout& layout, const FrameIndex& index, std::size_t i) {
  if (i >= index.size()) {
    fail(ErrorCode::kOutOfRange,
         "frame " + std::to_string(i) + " out of range (" + std::to_string(index.size()) + " frames)");
  }
  const auto bytes = src.read_vector(index.offsets[i], index.lengths[i]);
  return decode_frame(layout, bytes, static_cast<std::int64_t>(i), index.offsets[i]);
}

std::vector<Frame> read_sequential(const ByteSource& src) {
  const Layout layout = read_layout(src);
  const auto all = src.read_vector(0, src.size());
  std::vector<Frame> frames;
  std::uint64_t pos = layout.header_bytes;
  while (pos < all.size()) {
    // Measure the frame by walking its record markers.
    std::uint64_t end = pos;
    const int records = (layout.has_unit_cell ? 1 : 0) + (layout.has_4d ? 4 : 3);
    bool complete = true;
    for (int r = 0; r < records; ++r) {
      if (end + 4 > all.size()) {
        complete = false;
        break;
      }
      const auto len = detail::load<std::int32_t>(all.data() + end, layout.order);
      end += 8 + static_cast<std::uint64_t>(std::max(len, 0));
    }
    if (!complete || end > all.size()) break;
    frames.push_back(decode_frame(layout, std::span(all).subspan(pos, end - pos),
                                  static_cast<std::int64_t>(frames.size()), pos));
    pos = end;
  }
  return frames;
}

}  // namespace mdstream::dcd
