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

#include "mdstream/traj/frame_index.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "endian.hpp"
#include "mdstream/core/error.hpp"

namespace mdstream {

namespace {
constexpr char kMagic[4] = {'M', 'D', 'I', 'X'};
constexpr std::size_t kHeaderSize = 4 + 4 + 8;
}  // namespace

std::string_view to_string(TrajectoryFormat format) {
  return format == TrajectoryFormat::kXtc ? "XTC" : "DCD";
}

TrajectoryFormat parse_format(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "XTC") return TrajectoryFormat::kXtc;
  if (upper == "DCD") return TrajectoryFormat::kDcd;
  fail(ErrorCode::kUnsupportedFormat, "unknown trajectory format '" + std::string(name) + "'");
}

void FrameIndex::validate(std::uint64_t file_size) const {
  if (offsets.size() != lengths.size()) fail(ErrorCode::kCorrupt, "frame index arrays differ in length");
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (lengths[i] == 0) fail(ErrorCode::kCorrupt, "frame " + std::to_string(i) + " has zero length");
    const std::uint64_t end = offsets[i] + lengths[i];
    const std::uint64_t limit = i + 1 < offsets.size() ? offsets[i + 1] : file_size;
    if (end < offsets[i] || end > limit) {
      fail(ErrorCode::kCorrupt, "frame " + std::to_string(i) + " overlaps the next frame or the end of file");
    }
  }
}

std::vector<std::byte> encode_index(const FrameIndex& index) {
  std::vector<std::byte> out(kHeaderSize + 16 * index.size());
  std::memcpy(out.data(), kMagic, 4);
  detail::store<std::uint32_t>(out.data() + 4, kIndexVersion, std::endian::little);
  detail::store<std::uint64_t>(out.data() + 8, index.size(), std::endian::little);
  std::byte* p = out.data() + kHeaderSize;
  for (std::size_t i = 0; i < index.size(); ++i, p += 16) {
    detail::store<std::uint64_t>(p, index.offsets[i], std::endian::little);
    detail::store<std::uint64_t>(p + 8, index.lengths[i], std::endian::little);
  }
  return out;
}

FrameIndex decode_index(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorCode::kCorrupt, "not an MDIX index");
  }
  detail::Cursor cur(bytes.subspan(4), std::endian::little, 4);
  const auto version = cur.get<std::uint32_t>();
  if (version != kIndexVersion) {
    fail(ErrorCode::kUnsupportedFormat, "MDIX version " + std::to_string(version) + " not supported");
  }
  const auto n = cur.get<std::uint64_t>();
  if (cur.remaining() != n * 16) fail(ErrorCode::kCorrupt, "MDIX size does not match frame count");
  FrameIndex index;
  index.offsets.reserve(n);
  index.lengths.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto off = cur.get<std::uint64_t>();
    const auto len = cur.get<std::uint64_t>();
    index.push_back(off, len);
  }
  return index;
}

std::filesystem::path index_sidecar_path(const std::filesystem::path& trajectory) {
  std::filesystem::path p = trajectory;
  p += ".mdix";
  return p;
}

void write_index_file(const std::filesystem::path& path, const FrameIndex& index) {
  const auto bytes = encode_index(index);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) fail(ErrorCode::kIo, "cannot write index " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

FrameIndex read_index_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open index " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_index(std::as_bytes(std::span(raw)));
}

}  // namespace mdstream
