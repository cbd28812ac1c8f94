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

#include "mdstream/core/model.hpp"

#include <algorithm>
#include <numeric>

#include "mdstream/core/error.hpp"

namespace mdstream {

Coords::Coords(std::vector<double> xyz) : xyz_(std::move(xyz)) {
  if (xyz_.size() % 3 != 0) {
    fail(ErrorCode::kInvalidArgument, "coordinate array length is not a multiple of 3");
  }
}

bool Structure::has_chain(char chain_id) const {
  return std::find(chains.begin(), chains.end(), chain_id) != chains.end();
}

std::ptrdiff_t Structure::find_atom(std::size_t residue_index, const std::string& name) const {
  const AtomRange r = residues.at(residue_index).atom_range;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    if (atoms[i].name == name) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

Selection::Selection(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    if (indices_[k] <= indices_[k - 1]) {
      fail(ErrorCode::kInvalidArgument, "selection indices must be strictly ascending");
    }
  }
}

Selection Selection::all(std::size_t n_atoms) {
  std::vector<std::size_t> idx(n_atoms);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return Selection(std::move(idx));
}

void Selection::check_bounds(std::size_t n_atoms) const {
  if (!indices_.empty() && indices_.back() >= n_atoms) {
    fail(ErrorCode::kOutOfRange, "selection index " + std::to_string(indices_.back()) +
                                     " out of range for " + std::to_string(n_atoms) + " atoms");
  }
}

}  // namespace mdstream
