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

#include <cstring>

#include "check.hpp"
#include "mdstream/traj/frame_index.hpp"
#include "support.hpp"

using namespace mdstream;

namespace {

std::uint64_t le64(const std::vector<std::byte>& b, std::size_t at) {
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | std::to_integer<std::uint64_t>(b[at + k]);
  return v;
}

}  // namespace

TEST_CASE("MDIX layout is little-endian magic, version, count, pairs") {
  FrameIndex idx;
  idx.push_back(0, 92);
  idx.push_back(92, 100);
  const auto bytes = encode_index(idx);
  REQUIRE(bytes.size() == 4 + 4 + 8 + 2 * 16);
  CHECK(std::memcmp(bytes.data(), "MDIX", 4) == 0);
  CHECK(std::to_integer<int>(bytes[4]) == 1);
  CHECK(std::to_integer<int>(bytes[5]) == 0);
  CHECK(le64(bytes, 8) == 2);
  CHECK(le64(bytes, 16) == 0);
  CHECK(le64(bytes, 24) == 92);
  CHECK(le64(bytes, 32) == 92);
  CHECK(le64(bytes, 40) == 100);
  CHECK(decode_index(bytes) == idx);
}

TEST_CASE("MDIX decoding rejects damage") {
  FrameIndex idx;
  idx.push_back(0, 10);
  auto bytes = encode_index(idx);
  auto bad_magic = bytes;
  bad_magic[0] = std::byte{'X'};
  CHECK_ERROR_CODE(decode_index(bad_magic), ErrorCode::kCorrupt);
  auto bad_version = bytes;
  bad_version[4] = std::byte{2};
  CHECK_ERROR_CODE(decode_index(bad_version), ErrorCode::kUnsupportedFormat);
  auto short_bytes = bytes;
  short_bytes.pop_back();
  CHECK_ERROR_CODE(decode_index(short_bytes), ErrorCode::kCorrupt);
  CHECK_ERROR_CODE(decode_index(std::vector<std::byte>(3)), ErrorCode::kCorrupt);
}

TEST_CASE("index validation") {
  FrameIndex ok;
  ok.push_back(10, 20);
  ok.push_back(30, 5);
  ok.validate(35);
  CHECK_ERROR_CODE(ok.validate(34), ErrorCode::kCorrupt);
  FrameIndex overlap;
  overlap.push_back(0, 20);
  overlap.push_back(10, 20);
  CHECK_ERROR_CODE(overlap.validate(100), ErrorCode::kCorrupt);
  FrameIndex zero;
  zero.push_back(0, 0);
  CHECK_ERROR_CODE(zero.validate(100), ErrorCode::kCorrupt);
}

TEST_CASE("index files round trip through the sidecar path") {
  testsupport::TempDir dir;
  const auto traj = dir / "a.xtc";
  CHECK(index_sidecar_path(traj) == dir / "a.xtc.mdix");
  FrameIndex idx;
  for (std::uint64_t i = 0; i < 1000; ++i) idx.push_back(i * 100, 100);
  write_index_file(index_sidecar_path(traj), idx);
  CHECK(read_index_file(index_sidecar_path(traj)) == idx);
  CHECK(!std::filesystem::exists(dir / "a.xtc.mdix.tmp"));
  CHECK_ERROR_CODE(read_index_file(dir / "missing.mdix"), ErrorCode::kIo);
}

TEST_CASE("format names") {
  CHECK(to_string(TrajectoryFormat::kXtc) == "XTC");
  CHECK(parse_format("dcd") == TrajectoryFormat::kDcd);
  CHECK_ERROR_CODE(parse_format("trr"), ErrorCode::kUnsupportedFormat);
}
