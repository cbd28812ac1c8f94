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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdstream {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(Vec3, Vec3) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Flat N×3 coordinate storage (x0 y0 z0 x1 ...), Å.
class Coords {
 public:
  Coords() = default;
  explicit Coords(std::size_t n_atoms) : xyz_(3 * n_atoms, 0.0) {}
  explicit Coords(std::vector<double> xyz);

  std::size_t size() const { return xyz_.size() / 3; }
  bool empty() const { return xyz_.empty(); }

  Vec3 operator[](std::size_t i) const {
    return {xyz_[3 * i], xyz_[3 * i + 1], xyz_[3 * i + 2]};
  }
  void set(std::size_t i, Vec3 v) {
    xyz_[3 * i] = v.x;
    xyz_[3 * i + 1] = v.y;
    xyz_[3 * i + 2] = v.z;
  }

  std::span<const double> flat() const& { return xyz_; }
  std::span<double> flat() & { return xyz_; }
  std::span<const double> flat() const&& = delete;

  friend bool operator==(const Coords&, const Coords&) = default;

 private:
  std::vector<double> xyz_;
};

struct Atom {
  int serial = 0;
  std::string name;
  std::string element;
  std::size_t residue_index = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Half-open [begin, end) range into Structure::atoms.
struct AtomRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(AtomRange, AtomRange) = default;
};

struct Residue {
  std::string name;
  int seq_id = 0;
  char chain_id = ' ';
  AtomRange atom_range;

  friend bool operator==(const Residue&, const Residue&) = default;
};

struct Structure {
  std::string id;
  std::vector<Atom> atoms;
  std::vector<Residue> residues;
  std::vector<char> chains;
  Coords reference_coords;

  std::size_t atom_count() const { return atoms.size(); }
  bool has_chain(char chain_id) const;
  // Index of the atom named `name` inside residue `residue_index`, or -1.
  std::ptrdiff_t find_atom(std::size_t residue_index, const std::string& name) const;

  friend bool operator==(const Structure&, const Structure&) = default;
};

// Row-vector box matrix, Å.
using Box = std::array<double, 9>;

struct Frame {
  std::int64_t frame_number = 0;
  double time_ps = 0;
  Box box{};
  Coords coords;

  std::size_t atom_count() const { return coords.size(); }
  friend bool operator==(const Frame&, const Frame&) = default;
};

// Strictly ascending atom indices.
class Selection {
 public:
  Selection() = default;
  // Throws kInvalidArgument unless `indices` is strictly ascending.
  explicit Selection(std::vector<std::size_t> indices);

  static Selection all(std::size_t n_atoms);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  // Throws kOutOfRange if any index is >= n_atoms.
  void check_bounds(std::size_t n_atoms) const;

  friend bool operator==(const Selection&, const Selection&) = default;

 private:
  std::vector<std::size_t> indices_;
};

}  // namespace mdstream
