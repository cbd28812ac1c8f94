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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdstream {

enum class TrajectoryFormat { kXtc, kDcd };

std::string_view to_string(TrajectoryFormat format);
// Accepts "XTC"/"DCD" in any case; throws kUnsupportedFormat otherwise.
TrajectoryFormat parse_format(std::string_view name);

struct TrajectoryMeta {
  std::size_t n_atoms = 0;
  std::size_t n_frames = 0;
  TrajectoryFormat format = TrajectoryFormat::kXtc;
  std::optional<double> timestep_ps;
  std::uint64_t file_size = 0;

  friend bool operator==(const TrajectoryMeta&, const TrajectoryMeta&) = default;
};

// Byte offset and length of every frame in a trajectory file.
struct FrameIndex {
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint64_t> lengths;

  std::size_t size() const { return offsets.size(); }
  void push_back(std::uint64_t offset, std::uint64_t length) {
    offsets.push_back(offset);
    lengths.push_back(length);
  }
  // Throws kCorrupt unless offsets ascend, frames do not overlap and the last
  // frame ends within file_size.
  void validate(std::uint64_t file_size) const;

  friend bool operator==(const FrameIndex&, const FrameIndex&) = default;
};

struct ScanResult {
  TrajectoryMeta meta;
  FrameIndex index;
  // Set when a trailing partial frame was dropped from the index.
  bool truncated = false;
};

// "MDIX" sidecar: magic, u32 version, u64 n_frames, then (u64 offset,
// u64 length) pairs; all little-endian.
inline constexpr std::uint32_t kIndexVersion = 1;

std::vector<std::byte> encode_index(const FrameIndex& index);
FrameIndex decode_index(std::span<const std::byte> bytes);

std::filesystem::path index_sidecar_path(const std::filesystem::path& trajectory);
void write_index_file(const std::filesystem::path& path, const FrameIndex& index);
FrameIndex read_index_file(const std::filesystem::path& path);

}  // namespace mdstream
