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

#include "mdstream/analysis/superpose.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "mdstream/core/error.hpp"
#include "mdstream/simd/kernels.hpp"

namespace mdstream::analysis {
namespace {

Eigen::Vector3d centroid(const Coords& c) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3 p = c[i];
    sum += Eigen::Vector3d(p.x, p.y, p.z);
  }
  return sum / static_cast<double>(c.size());
}

}  // namespace

Vec3 Superposition::apply(Vec3 p) const {
  const auto& r = rotation;
  return {r[0] * p.x + r[1] * p.y + r[2] * p.z + translation.x,
          r[3] * p.x + r[4] * p.y + r[5] * p.z + translation.y,
          r[6] * p.x + r[7] * p.y + r[8] * p.z + translation.z};
}

Coords Superposition::apply(const Coords& points) const {
  Coords out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.set(i, apply(points[i]));
  return out;
}

double rmsd(const Coords& a, const Coords& b) {
  if (a.size() != b.size()) fail(ErrorCode::kInvalidArgument, "point sets differ in size");
  if (a.empty()) fail(ErrorCode::kInvalidArgument, "empty point set");
  return std::sqrt(simd::sum_sq_diff(a.flat(), b.flat()) / static_cast<double>(a.size()));
}

Superposition kabsch(const Coords& moving, const Coords& target) {
  if (moving.size() != target.size()) {
    fail(ErrorCode::kInvalidArgument, "kabsch: point sets differ in size (" + std::to_string(moving.size()) +
                                          " vs " + std::to_string(target.size()) + ")");
  }
  if (moving.size() < 3) {
    fail(ErrorCode::kInsufficientPoints, "kabsch needs at least 3 points, got " + std::to_string(moving.size()));
  }
  const Eigen::Vector3d cm = centroid(moving);
  const Eigen::Vector3d ct = centroid(target);
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < moving.size(); ++i) {
    const Vec3 p = moving[i];
    const Vec3 q = target[i];
    h += (Eigen::Vector3d(p.x, p.y, p.z) - cm) * (Eigen::Vector3d(q.x, q.y, q.z) - ct).transpose();
  }
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d& u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((v * u.transpose()).determinant() < 0) d(2, 2) = -1.0;
  const Eigen::Matrix3d r = v * d * u.transpose();
  const Eigen::Vector3d t = ct - r * cm;

  Superposition s;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) s.rotation[3 * row + col] = r(row, col);
  }
  s.translation = {t.x(), t.y(), t.z()};
  s.rmsd = rmsd(s.apply(moving), target);
  return s;
}

Coords gather(const Coords& coords, const Selection& selection) {
  selection.check_bounds(coords.size());
  Coords out(selection.size());
  for (std::size_t k = 0; k < selection.size(); ++k) out.set(k, coords[selection.indices()[k]]);
  return out;
}

double rmsd(const Coords& a, const Coords& b, const Selection& selection, bool superpose) {
  if (selection.empty()) fail(ErrorCode::kInvalidArgument, "rmsd: empty selection");
  const Coords pa = gather(a, selection);
  const Coords pb = gather(b, selection);
  // Identical sets are exactly 0; the SVD path would leave rounding noise.
  if (superpose) return pa == pb && pa.size() >= 3 ? 0.0 : kabsch(pa, pb).rmsd;
  return rmsd(pa, pb);
}

}  // namespace mdstream::analysis
