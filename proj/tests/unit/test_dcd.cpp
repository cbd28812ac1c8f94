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

#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <numbers>

#include "check.hpp"
#include "mdstream/traj/dcd.hpp"
#include "support.hpp"

using namespace mdstream;
using testsupport::DcdOptions;

namespace {

MemorySource load(const std::filesystem::path& p) {
  const std::string s = testsupport::read_bytes(p);
  std::vector<std::byte> b(s.size());
  std::memcpy(b.data(), s.data(), s.size());
  return MemorySource(std::move(b));
}

std::vector<std::vector<float>> random_frames(std::size_t n_frames, std::size_t natoms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-50.0f, 50.0f);
  std::vector<std::vector<float>> frames(n_frames, std::vector<float>(3 * natoms));
  for (auto& f : frames) {
    for (auto& v : f) v = u(rng);
  }
  return frames;
}

// Header size from the writer: 84-byte record, 4 + 160 title record, natoms record.
constexpr std::uint64_t kFixtureHeader = (8 + 84) + (8 + 4 + 160) + (8 + 4);

}  // namespace

TEST_CASE("coordinates come back de-interleaved from X, Y, Z records") {
  testsupport::TempDir dir;
  const std::vector<std::vector<float>> frames = {{1, 2, 3, 4, 5, 6}, {7, 8, 9, 10, 11, 12}};
  testsupport::write_dcd(dir / "a.dcd", {}, frames);
  const auto src = load(dir / "a.dcd");
  const auto layout = dcd::read_layout(src);
  CHECK(layout.natoms == 2);
  CHECK(layout.header_bytes == kFixtureHeader);
  CHECK(layout.frame_bytes == 3 * (8 + 8));
  CHECK(layout.charmm);
  CHECK(!layout.has_unit_cell);
  CHECK(!layout.timestep_ps.has_value());
  const auto scan = dcd::scan(src);
  REQUIRE(scan.meta.n_frames == 2);
  const Frame f1 = dcd::read_frame(src, layout, scan.index, 1);
  CHECK(f1.coords[0] == Vec3{7, 8, 9});
  CHECK(f1.coords[1] == Vec3{10, 11, 12});
  CHECK(f1.frame_number == 1);
  CHECK(f1.time_ps == 1.0);
  CHECK(f1.box == Box{});
}

TEST_CASE("frame size for 100 atoms without a unit cell") {
  testsupport::TempDir dir;
  testsupport::write_dcd(dir / "b.dcd", {}, random_frames(4, 100, 1));
  const auto src = load(dir / "b.dcd");
  const auto layout = dcd::read_layout(src);
  CHECK(layout.frame_bytes == 1224);
  CHECK(src.size() == kFixtureHeader + 4 * 1224);
  const auto scan = dcd::scan(src);
  CHECK(scan.meta.n_frames == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(scan.index.offsets[i] == kFixtureHeader + i * 1224);
}

TEST_CASE("little- and big-endian files decode identically") {
  testsupport::TempDir dir;
  const auto frames = random_frames(5, 33, 2);
  DcdOptions le;
  le.unit_cell = true;
  le.delta = 0.5f;
  le.nsavc = 10;
  DcdOptions be = le;
  be.order = std::endian::big;
  const std::vector<std::array<double, 6>> cells(5, {40, 0.0, 41, 0.0, 0.0, 42});
  testsupport::write_dcd(dir / "le.dcd", le, frames, cells);
  testsupport::write_dcd(dir / "be.dcd", be, frames, cells);
  CHECK(testsupport::read_bytes(dir / "le.dcd") != testsupport::read_bytes(dir / "be.dcd"));
  const auto a = dcd::read_sequential(load(dir / "le.dcd"));
  const auto b = dcd::read_sequential(load(dir / "be.dcd"));
  REQUIRE(a.size() == 5);
  CHECK(a == b);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto flat = a[f].coords.flat();
    for (std::size_t k = 0; k < flat.size(); ++k) REQUIRE(flat[k] == static_cast<double>(frames[f][k]));
  }
  CHECK(dcd::read_layout(load(dir / "be.dcd")).order == std::endian::big);
}

TEST_CASE("timestep is DELTA in AKMA units times the save interval") {
  testsupport::TempDir dir;
  DcdOptions o;
  o.delta = 40.9;
  o.nsavc = 100;
  testsupport::write_dcd(dir / "t.dcd", o, random_frames(3, 4, 3));
  const auto src = load(dir / "t.dcd");
  const auto layout = dcd::read_layout(src);
  REQUIRE(layout.timestep_ps.has_value());
  const double expected = static_cast<double>(40.9f) * 0.0488882129 * 100;
  CHECK(*layout.timestep_ps == doctest::Approx(expected).epsilon(1e-15));
  CHECK(*layout.timestep_ps == doctest::Approx(200.0).epsilon(1e-3));
  const auto scan = dcd::scan(src);
  CHECK(dcd::read_frame(src, layout, scan.index, 2).time_ps == doctest::Approx(2 * expected));

  DcdOptions xplor = o;
  xplor.charmm = false;
  testsupport::write_dcd(dir / "x.dcd", xplor, random_frames(3, 4, 3));
  const auto xl = dcd::read_layout(load(dir / "x.dcd"));
  CHECK(!xl.charmm);
  REQUIRE(xl.timestep_ps.has_value());
  CHECK(*xl.timestep_ps == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("unit cell conversion") {
  SUBCASE("orthorhombic in degrees") {
    const Box box = dcd::box_from_unit_cell({30, 90, 30, 90, 90, 30});
    CHECK(box == Box{30, 0, 0, 0, 30, 0, 0, 0, 30});
  }
  SUBCASE("cosine encoding equals degree encoding") {
    const Box deg = dcd::box_from_unit_cell({20, 90, 25, 90, 90, 30});
    const Box cosines = dcd::box_from_unit_cell({20, 0.0, 25, 0.0, 0.0, 30});
    for (int k = 0; k < 9; ++k) CHECK(deg[k] == doctest::Approx(cosines[k]).epsilon(1e-12));
  }
  SUBCASE("triclinic vectors keep their lengths and angles") {
    const double a = 21, b = 23, c = 27, alpha = 80, beta = 95, gamma = 110;
    const Box box = dcd::box_from_unit_cell({a, gamma, b, beta, alpha, c});
    const Vec3 va{box[0], box[1], box[2]}, vb{box[3], box[4], box[5]}, vc{box[6], box[7], box[8]};
    auto len = [](Vec3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); };
    auto ang = [&](Vec3 u, Vec3 v) {
      return std::acos((u.x * v.x + u.y * v.y + u.z * v.z) / (len(u) * len(v))) * 180 / std::numbers::pi;
    };
    CHECK(len(va) == doctest::Approx(a));
    CHECK(len(vb) == doctest::Approx(b));
    CHECK(len(vc) == doctest::Approx(c));
    CHECK(ang(vb, vc) == doctest::Approx(alpha));
    CHECK(ang(va, vc) == doctest::Approx(beta));
    CHECK(ang(va, vb) == doctest::Approx(gamma));
  }
}

TEST_CASE("4D files skip the fourth coordinate record") {
  testsupport::TempDir dir;
  DcdOptions o;
  o.four_d = true;
  const auto frames = random_frames(3, 5, 4);
  testsupport::write_dcd(dir / "d4.dcd", o, frames);
  const auto src = load(dir / "d4.dcd");
  const auto layout = dcd::read_layout(src);
  CHECK(layout.frame_bytes == 4 * (8 + 20));
  const auto seq = dcd::read_sequential(src);
  REQUIRE(seq.size() == 3);
  CHECK(seq[2].coords[4] == Vec3{frames[2][12], frames[2][13], frames[2][14]});
}

TEST_CASE("header errors") {
  testsupport::TempDir dir;
  const auto frames = random_frames(2, 3, 5);
  SUBCASE("velocity files are not coordinates") {
    DcdOptions o;
    o.tag = "VELD";
    testsupport::write_dcd(dir / "v.dcd", o, frames);
    CHECK_ERROR_MESSAGE(dcd::read_layout(load(dir / "v.dcd")), ErrorCode::kUnsupportedFormat, "VELD");
  }
  SUBCASE("fixed atoms") {
    DcdOptions o;
    o.fixed_atoms = 1;
    testsupport::write_dcd(dir / "f.dcd", o, frames);
    CHECK_ERROR_CODE(dcd::read_layout(load(dir / "f.dcd")), ErrorCode::kUnsupportedFormat);
  }
  SUBCASE("first marker is not 84") {
    testsupport::write_dcd(dir / "m.dcd", {}, frames);
    std::string bytes = testsupport::read_bytes(dir / "m.dcd");
    bytes[0] = 85;
    testsupport::write_bytes(dir / "m.dcd", bytes);
    CHECK_ERROR_CODE(dcd::read_layout(load(dir / "m.dcd")), ErrorCode::kUnsupportedFormat);
    CHECK_ERROR_CODE(dcd::read_layout(MemorySource({})), ErrorCode::kUnsupportedFormat);
  }
  SUBCASE("record suffix mismatch names the offset") {
    testsupport::write_dcd(dir / "s.dcd", {}, frames);
    std::string bytes = testsupport::read_bytes(dir / "s.dcd");
    bytes[4 + 84] = 83;  // header record suffix
    testsupport::write_bytes(dir / "s.dcd", bytes);
    CHECK_ERROR_MESSAGE(dcd::read_layout(load(dir / "s.dcd")), ErrorCode::kCorrupt, "offset 88");
  }
  SUBCASE("damaged coordinate record marker") {
    testsupport::write_dcd(dir / "c.dcd", {}, frames);
    std::string bytes = testsupport::read_bytes(dir / "c.dcd");
    const std::uint64_t frame1 = kFixtureHeader + 3 * (8 + 12);
    bytes[frame1 + 8 + 12] = 99;  // Y record prefix of frame 1
    testsupport::write_bytes(dir / "c.dcd", bytes);
    const auto src = load(dir / "c.dcd");
    const auto scan = dcd::scan(src);
    const auto layout = dcd::read_layout(src);
    CHECK_ERROR_MESSAGE(dcd::read_frame(src, layout, scan.index, 1), ErrorCode::kCorrupt,
                        std::to_string(frame1 + 20));
    CHECK_ERROR_CODE(dcd::read_frame(src, layout, scan.index, 2), ErrorCode::kOutOfRange);
  }
}

TEST_CASE("frame count comes from the file size") {
  testsupport::TempDir dir;
  DcdOptions o;
  o.declared_frames = 0;  // writers that never patch the header
  testsupport::write_dcd(dir / "n.dcd", o, random_frames(6, 10, 6));
  std::string bytes = testsupport::read_bytes(dir / "n.dcd");
  CHECK(dcd::scan(load(dir / "n.dcd")).meta.n_frames == 6);
  testsupport::write_bytes(dir / "n.dcd", bytes.substr(0, bytes.size() - 30));
  const auto cut = dcd::scan(load(dir / "n.dcd"));
  CHECK(cut.meta.n_frames == 5);
  CHECK(cut.truncated);
  CHECK(dcd::read_sequential(load(dir / "n.dcd")).size() == 5);
  testsupport::write_bytes(dir / "n.dcd", bytes.substr(0, kFixtureHeader + 10));
  CHECK_ERROR_CODE(dcd::scan(load(dir / "n.dcd")), ErrorCode::kCorrupt);
}

TEST_CASE("random access equals the sequential parse") {
  testsupport::TempDir dir;
  DcdOptions o;
  o.unit_cell = true;
  o.order = std::endian::big;
  testsupport::write_dcd(dir / "r.dcd", o, random_frames(12, 17, 7));
  const auto src = load(dir / "r.dcd");
  const auto layout = dcd::read_layout(src);
  const auto scan = dcd::scan(src);
  const auto seq = dcd::read_sequential(src);
  REQUIRE(seq.size() == 12);
  CountingSource counting(src);
  for (std::size_t i : {11, 0, 6, 6, 3, 9}) {
    counting.reset();
    CHECK(dcd::read_frame(counting, layout, scan.index, i) == seq[i]);
    CHECK(counting.bytes_read() == layout.frame_bytes);
  }
}

TEST_CASE("mdtraj golden file") {
  const std::string base = std::string(MDSTREAM_TEST_DATA) + "/mdtraj_cell";
  std::ifstream in(base + ".json");
  const auto doc = nlohmann::json::parse(in);
  const auto src = load(base + ".dcd");
  const auto layout = dcd::read_layout(src);
  const auto scan = dcd::scan(src);
  REQUIRE(scan.meta.n_frames == doc["n_frames"].get<std::size_t>());
  REQUIRE(scan.meta.n_atoms == doc["n_atoms"].get<std::size_t>());
  for (std::size_t i = 0; i < scan.meta.n_frames; ++i) {
    const Frame f = dcd::read_frame(src, layout, scan.index, i);
    const auto flat = f.coords.flat();
    CHECK(std::vector<double>(flat.begin(), flat.end()) == doc["coords"][i].get<std::vector<double>>());
    const auto box = doc["box"][i].get<std::vector<double>>();
    for (int k = 0; k < 9; ++k) CHECK(f.box[k] == doctest::Approx(box[k]).epsilon(1e-6));
  }
}
