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

#include <cstddef>
#include <vector>

#include "mdstream/core/model.hpp"

namespace mdstream {

// Anything frames can be pulled from by number.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t n_frames() const = 0;
  virtual std::size_t n_atoms() const = 0;
  virtual Frame frame(std::size_t i) const = 0;
};

class InMemoryFrames final : public FrameSource {
 public:
  // Throws kInvalidArgument when frames is empty or atom counts disagree.
  explicit InMemoryFrames(std::vector<Frame> frames);

  std::size_t n_frames() const override { return frames_.size(); }
  std::size_t n_atoms() const override { return frames_.front().atom_count(); }
  Frame frame(std::size_t i) const override;

 private:
  std::vector<Frame> frames_;
};

}  // namespace mdstream
