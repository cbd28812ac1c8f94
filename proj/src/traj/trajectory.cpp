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

#include "mdstream/traj/trajectory.hpp"

#include <algorithm>
#include <cctype>

#include "endian.hpp"
#include "mdstream/core/error.hpp"
#include "mdstream/traj/xtc.hpp"

namespace mdstream {

TrajectoryFormat detect_format(const ByteSource& src, const std::filesystem::path& name_hint) {
  std::byte head[8];
  const std::size_t got = src.read_at(0, head);
  if (got >= 4) {
    if (detail::load<std::int32_t>(head, std::endian::big) == xtc::kMagic) return TrajectoryFormat::kXtc;
    const bool marker = detail::load<std::int32_t>(head, std::endian::little) == 84 ||
                        detail::load<std::int32_t>(head, std::endian::big) == 84;
    if (marker && got >= 8 && std::memcmp(head + 4, "CORD", 4) == 0) return TrajectoryFormat::kDcd;
  }
  std::string ext = name_hint.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".xtc") return TrajectoryFormat::kXtc;
  if (ext == ".dcd") return TrajectoryFormat::kDcd;
  fail(ErrorCode::kUnsupportedFormat, "cannot determine trajectory format of " + name_hint.string());
}

TrajectoryFormat detect_format(const std::filesystem::path& path) {
  return detect_format(FileSource(path), path);
}

Trajectory Trajectory::open(const std::filesystem::path& path) {
  FileSource src(path);
  Trajectory t;
  t.path_ = path;
  const TrajectoryFormat format = detect_format(src, path);
  ScanResult scan;
  if (format == TrajectoryFormat::kXtc) {
    scan = xtc::scan(src);
  } else {
    t.dcd_layout_ = dcd::read_layout(src);
    scan = dcd::scan(src);
  }
  t.meta_ = scan.meta;
  t.index_ = std::move(scan.index);
  t.truncated_ = scan.truncated;
  return t;
}

Trajectory Trajectory::open_indexed(const std::filesystem::path& path, TrajectoryFormat format,
                                    FrameIndex index) {
  FileSource src(path);
  index.validate(src.size());
  if (index.size() == 0) fail(ErrorCode::kCorrupt, "index has no frames: " + path.string());
  Trajectory t;
  t.path_ = path;
  t.meta_.format = format;
  t.meta_.file_size = src.size();
  t.meta_.n_frames = index.size();
  if (format == TrajectoryFormat::kXtc) {
    const xtc::FrameHeader first = xtc::read_header(src, index.offsets.front());
    const xtc::FrameHeader last = xtc::read_header(src, index.offsets.back());
    if (first.natoms != last.natoms || first.length != index.lengths.front() ||
        last.length != index.lengths.back()) {
      fail(ErrorCode::kCorrupt, "index does not match " + path.string());
    }
    t.meta_.n_atoms = static_cast<std::size_t>(first.natoms);
    if (index.size() > 1) {
      const xtc::FrameHeader second = xtc::read_header(src, index.offsets[1]);
      t.meta_.timestep_ps = static_cast<double>(second.time) - first.time;
    }
  } else {
    t.dcd_layout_ = dcd::read_layout(src);
    if (index.offsets.front() != t.dcd_layout_->header_bytes ||
        index.lengths.front() != t.dcd_layout_->frame_bytes) {
      fail(ErrorCode::kCorrupt, "index does not match " + path.string());
    }
    t.meta_.n_atoms = t.dcd_layout_->natoms;
    t.meta_.timestep_ps = t.dcd_layout_->timestep_ps;
  }
  t.index_ = std::move(index);
  return t;
}

Frame Trajectory::read_frame(std::size_t i) const {
  FileSource src(path_);
  return read_frame(src, i);
}

Frame Trajectory::read_frame(const ByteSource& src, std::size_t i) const {
  if (meta_.format == TrajectoryFormat::kXtc) return xtc::read_frame(src, index_, i);
  return dcd::read_frame(src, *dcd_layout_, index_, i);
}

}  // namespace mdstream
