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

#include "mdstream/analysis/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string>

#include "mdstream/core/error.hpp"

namespace mdstream::analysis {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
// Arms shorter than this (Å) have no direction.
constexpr double kMinArm = 1e-10;

double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

void check_atoms(const Frame& frame, std::initializer_list<std::size_t> atoms) {
  for (std::size_t a : atoms) {
    if (a >= frame.atom_count()) {
      fail(ErrorCode::kOutOfRange, "atom index " + std::to_string(a) + " out of range for " +
                                       std::to_string(frame.atom_count()) + " atoms");
    }
  }
  for (auto p = atoms.begin(); p != atoms.end(); ++p) {
    if (std::find(p + 1, atoms.end(), *p) != atoms.end()) {
      fail(ErrorCode::kInvalidArgument, "atom index " + std::to_string(*p) + " repeated");
    }
  }
}

}  // namespace

double distance(Vec3 a, Vec3 b) { return norm(a - b); }

double angle(Vec3 a, Vec3 vertex, Vec3 c) {
  const Vec3 u = a - vertex;
  const Vec3 v = c - vertex;
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu < kMinArm || nv < kMinArm) fail(ErrorCode::kDegenerateGeometry, "angle arm has zero length");
  const double cosine = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
  return std::acos(cosine) * kRadToDeg;
}

double dihedral(Vec3 a, Vec3 b, Vec3 c, Vec3 d) {
  const Vec3 b1 = b - a;
  const Vec3 b2 = c - b;
  const Vec3 b3 = d - c;
  const Vec3 n1 = cross(b1, b2);
  const Vec3 n2 = cross(b2, b3);
  const double len2 = norm(b2);
  if (len2 < kMinArm || norm(n1) <= 1e-12 * norm(b1) * len2 || norm(n2) <= 1e-12 * len2 * norm(b3)) {
    fail(ErrorCode::kDegenerateGeometry, "dihedral has collinear atoms");
  }
  const double deg = std::atan2(len2 * dot(b1, n2), dot(n1, n2)) * kRadToDeg;
  return deg == -180.0 ? 180.0 : deg;
}

double distance(const Frame& frame, std::size_t i, std::size_t j) {
  check_atoms(frame, {i, j});
  return distance(frame.coords[i], frame.coords[j]);
}

double angle(const Frame& frame, std::size_t i, std::size_t j, std::size_t k) {
  check_atoms(frame, {i, j, k});
  return angle(frame.coords[i], frame.coords[j], frame.coords[k]);
}

double dihedral(const Frame& frame, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  check_atoms(frame, {i, j, k, l});
  return dihedral(frame.coords[i], frame.coords[j], frame.coords[k], frame.coords[l]);
}

}  // namespace mdstream::analysis
