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

#include <filesystem>
#include <optional>

#include "mdstream/core/frame_source.hpp"
#include "mdstream/traj/byte_source.hpp"
#include "mdstream/traj/dcd.hpp"
#include "mdstream/traj/frame_index.hpp"

namespace mdstream {

// Magic bytes first (XTC 1995 big-endian, DCD marker 84 in either order),
// then the file extension. Throws kUnsupportedFormat when neither decides.
TrajectoryFormat detect_format(const ByteSource& src, const std::filesystem::path& name_hint);
TrajectoryFormat detect_format(const std::filesystem::path& path);

// An indexed trajectory file. Immutable after construction; read_frame opens
// its own read-only handle so concurrent callers share nothing.
class Trajectory final : public FrameSource {
 public:
  // Detects the format and scans the whole file.
  static Trajectory open(const std::filesystem::path& path);
  // Trusts a previously built index after validating it against the file.
  static Trajectory open_indexed(const std::filesystem::path& path, TrajectoryFormat format,
                                 FrameIndex index);

  const std::filesystem::path& path() const { return path_; }
  const TrajectoryMeta& meta() const { return meta_; }
  const FrameIndex& index() const { return index_; }
  bool truncated() const { return truncated_; }

  Frame read_frame(std::size_t i) const;
  Frame read_frame(const ByteSource& src, std::size_t i) const;

  std::size_t n_frames() const override { return meta_.n_frames; }
  std::size_t n_atoms() const override { return meta_.n_atoms; }
  Frame frame(std::size_t i) const override { return read_frame(i); }

 private:
  Trajectory() = default;

  std::filesystem::path path_;
  TrajectoryMeta meta_;
  FrameIndex index_;
  bool truncated_ = false;
  std::optional<dcd::Layout> dcd_layout_;
};

}  // namespace mdstream
