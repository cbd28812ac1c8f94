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

#include "mdstream/core/model.hpp"

namespace mdstream::analysis {

// Euclidean distance between atoms i and j, Å. No minimum-image correction.
double distance(const Frame& frame, std::size_t i, std::size_t j);

// Angle at vertex j between arms j->i and j->k, degrees in [0, 180].
double angle(const Frame& frame, std::size_t i, std::size_t j, std::size_t k);

// Signed IUPAC torsion i-j-k-l, degrees in (-180, 180].
double dihedral(const Frame& frame, std::size_t i, std::size_t j, std::size_t k, std::size_t l);

// Point-level forms of the above, shared with the alignment module.
double distance(Vec3 a, Vec3 b);
double angle(Vec3 a, Vec3 vertex, Vec3 c);
double dihedral(Vec3 a, Vec3 b, Vec3 c, Vec3 d);

}  // namespace mdstream::analysis
