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

#include <doctest.h>

#include "check.hpp"
#include "mdstream/core/frame_source.hpp"
#include "mdstream/core/model.hpp"

using namespace mdstream;

TEST_CASE("vector helpers") {
  const Vec3 a{1, 2, 3}, b{4, 5, 6};
  CHECK(a + b == Vec3{5, 7, 9});
  CHECK(b - a == Vec3{3, 3, 3});
  CHECK(2.0 * a == Vec3{2, 4, 6});
  CHECK(dot(a, b) == 32);
  CHECK(cross(Vec3{1, 0, 0}, Vec3{0, 1, 0}) == Vec3{0, 0, 1});
}

TEST_CASE("coords store flat xyz") {
  Coords c(2);
  c.set(1, {7, 8, 9});
  CHECK(c.size() == 2);
  CHECK(c[1] == Vec3{7, 8, 9});
  CHECK(c.flat()[3] == 7);
  CHECK(c.flat()[5] == 9);
  CHECK(Coords(std::vector<double>{1, 2, 3, 4, 5, 6})[1] == Vec3{4, 5, 6});
  CHECK_ERROR_CODE(Coords(std::vector<double>{1, 2}), ErrorCode::kInvalidArgument);
}

TEST_CASE("selection must ascend strictly") {
  CHECK(Selection({0, 3, 5}).size() == 3);
  CHECK_ERROR_CODE(Selection({1, 1}), ErrorCode::kInvalidArgument);
  CHECK_ERROR_CODE(Selection({2, 1}), ErrorCode::kInvalidArgument);
  CHECK(Selection::all(4).indices() == std::vector<std::size_t>{0, 1, 2, 3});
  Selection({0, 3}).check_bounds(4);
  CHECK_ERROR_CODE(Selection({0, 4}).check_bounds(4), ErrorCode::kOutOfRange);
}

TEST_CASE("in-memory frames") {
  Frame f;
  f.coords = Coords(2);
  InMemoryFrames frames({f, f});
  CHECK(frames.n_frames() == 2);
  CHECK(frames.n_atoms() == 2);
  CHECK(frames.frame(1) == f);
  CHECK_ERROR_CODE(frames.frame(2), ErrorCode::kOutOfRange);
  CHECK_ERROR_CODE(InMemoryFrames({}), ErrorCode::kInvalidArgument);
  Frame g;
  g.coords = Coords(3);
  CHECK_ERROR_CODE(InMemoryFrames({f, g}), ErrorCode::kInvalidArgument);
}

TEST_CASE("error codes have names") {
  CHECK(to_string(ErrorCode::kNotFound) == "not found");
  const Error e(ErrorCode::kCorrupt, "boom");
  CHECK(e.code() == ErrorCode::kCorrupt);
  CHECK(std::string(e.what()) == "boom");
}
