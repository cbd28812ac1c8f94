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

// Reference formulas for checking the analysis code. Each uses a different
// construction than the library and carries long double where that helps.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "mdstream/core/model.hpp"

namespace testsupport::oracle {

using ld = long double;

struct V {
  ld x, y, z;
};

inline V v(mdstream::Vec3 p) { return {p.x, p.y, p.z}; }
inline V sub(V a, V b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline ld dot(V a, V b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline V cross(V a, V b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
inline V scale(ld s, V a) { return {s * a.x, s * a.y, s * a.z}; }
inline ld norm(V a) { return std::sqrt(dot(a, a)); }
constexpr ld kDeg = 180.0L / std::numbers::pi_v<ld>;

inline double distance(mdstream::Vec3 a, mdstream::Vec3 b) { return static_cast<double>(norm(sub(v(a), v(b)))); }

// atan2 of |u x v| and u . v, stable at both ends of [0, 180].
inline double angle(mdstream::Vec3 a, mdstream::Vec3 vertex, mdstream::Vec3 c) {
  const V u = sub(v(a), v(vertex)), w = sub(v(c), v(vertex));
  return static_cast<double>(std::atan2(norm(cross(u, w)), dot(u, w)) * kDeg);
}

// Projects the outer bonds onto the plane normal to the central bond.
inline double dihedral(mdstream::Vec3 p0, mdstream::Vec3 p1, mdstream::Vec3 p2, mdstream::Vec3 p3) {
  const V b0 = sub(v(p0), v(p1));
  V b1 = sub(v(p2), v(p1));
  const V b2 = sub(v(p3), v(p2));
  b1 = scale(1 / norm(b1), b1);
  const V pv = sub(b0, scale(dot(b0, b1), b1));
  const V pw = sub(b2, scale(dot(b2, b1), b1));
  const ld x = dot(pv, pw);
  const ld y = dot(cross(b1, pv), pw);
  return static_cast<double>(std::atan2(y, x) * kDeg);
}

inline double plain_rmsd(const mdstream::Coords& a, const mdstream::Coords& b) {
  ld s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const V d = sub(v(a[i]), v(b[i]));
    s += dot(d, d);
  }
  return static_cast<double>(std::sqrt(s / a.size()));
}

// Minimum RMSD over proper rotations from the largest eigenvalue of the
// 4x4 quaternion key matrix.
inline double quaternion_rmsd(const mdstream::Coords& p, const mdstream::Coords& q) {
  const std::size_t n = p.size();
  Eigen::Vector3d cp = Eigen::Vector3d::Zero(), cq = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    cp += Eigen::Vector3d(p[i].x, p[i].y, p[i].z);
    cq += Eigen::Vector3d(q[i].x, q[i].y, q[i].z);
  }
  cp /= n;
  cq /= n;
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  double e0 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d a = Eigen::Vector3d(p[i].x, p[i].y, p[i].z) - cp;
    const Eigen::Vector3d b = Eigen::Vector3d(q[i].x, q[i].y, q[i].z) - cq;
    s += a * b.transpose();
    e0 += a.squaredNorm() + b.squaredNorm();
  }
  Eigen::Matrix4d k;
  k << s(0, 0) + s(1, 1) + s(2, 2), s(1, 2) - s(2, 1), s(2, 0) - s(0, 2), s(0, 1) - s(1, 0),
      s(1, 2) - s(2, 1), s(0, 0) - s(1, 1) - s(2, 2), s(0, 1) + s(1, 0), s(0, 2) + s(2, 0),
      s(2, 0) - s(0, 2), s(0, 1) + s(1, 0), -s(0, 0) + s(1, 1) - s(2, 2), s(1, 2) + s(2, 1),
      s(0, 1) - s(1, 0), s(0, 2) + s(2, 0), s(1, 2) + s(2, 1), -s(0, 0) - s(1, 1) + s(2, 2);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(k);
  const double lmax = eig.eigenvalues()(3);
  return std::sqrt(std::max(0.0, (e0 - 2 * lmax) / n));
}

}  // namespace testsupport::oracle
