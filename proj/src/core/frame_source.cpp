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

#include "mdstream/core/frame_source.hpp"

#include <string>

#include "mdstream/core/error.hpp"

namespace mdstream {

InMemoryFrames::InMemoryFrames(std::vector<Frame> frames) : frames_(std::move(frames)) {
  if (frames_.empty()) fail(ErrorCode::kInvalidArgument, "no frames");
  for (const Frame& f : frames_) {
    if (f.atom_count() != frames_.front().atom_count()) {
      fail(ErrorCode::kInvalidArgument, "frames disagree on atom count");
    }
  }
}

Frame InMemoryFrames::frame(std::size_t i) const {
  if (i >= frames_.size()) {
    fail(ErrorCode::kOutOfRange, "frame " + std::to_string(i) + " out of range");
  }
  return frames_[i];
}

}  // namespace mdstream
