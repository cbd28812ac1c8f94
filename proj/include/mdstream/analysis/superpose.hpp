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

#include "mdstream/core/model.hpp"

namespace mdstream::analysis {

// Rigid transform x -> rotation * x + translation. rotation is row-major.
struct Superposition {
  std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
  Vec3 translation;
  double rmsd = 0;

  Vec3 apply(Vec3 p) const;
  Coords apply(const Coords& points) const;
};

// Proper rotation and translation minimising RMSD(rotation * P + t, Q), by SVD
// of the cross-covariance with the smallest singular direction flipped when
// the optimum would be a reflection. Throws kInsufficientPoints for N < 3 and
// kInvalidArgument for mismatched sizes.
Superposition kabsch(const Coords& moving, const Coords& target);

// RMSD over `selection`, after superposing that selection of `a` onto `b`
// when `superpose` is set. Throws kInvalidArgument for an empty selection.
double rmsd(const Coords& a, const Coords& b, const Selection& selection, bool superpose);

// Plain RMSD of two equally sized point sets.
double rmsd(const Coords& a, const Coords& b);

Coords gather(const Coords& coords, const Selection& selection);

}  // namespace mdstream::analysis
