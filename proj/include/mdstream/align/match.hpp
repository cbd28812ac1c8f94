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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdstream/align/clustal.hpp"
#include "mdstream/analysis/superpose.hpp"
#include "mdstream/core/model.hpp"

namespace mdstream::align {

struct RowMatch {
  std::size_t row = 0;
  std::string row_name;
  std::size_t structure_index = 0;  // into the structures passed to match_alignment
  std::string structure_id;
  char chain_id = ' ';
  double identity = 1.0;
  // One entry per alignment column: global residue index, or nullopt at gaps.
  std::vector<std::optional<std::size_t>> column_to_residue;
};

struct AlignmentMatch {
  std::vector<RowMatch> rows;
};

struct MatchOptions {
  double min_identity = 0.9;
};

// Assigns every alignment row to one (structure, chain). Exact sequence
// matches win over identity matches; a structure whose id equals the row
// name is preferred; candidates are tried best first and the first unclaimed chain wins.
// Throws kInvalidArgument for fewer than 2 structures, kMatch naming the row
// when nothing reaches min_identity, and kAmbiguous when a row's only
// candidates are already claimed by earlier rows.
AlignmentMatch match_alignment(const Alignment& alignment, std::span<const Structure> structures,
                               const MatchOptions& options = {});

// Residues of `chain_id` in file order, as global residue indices.
std::vector<std::size_t> chain_residues(const Structure& structure, char chain_id);

struct StructureFit {
  std::string structure_id;
  char chain_id = ' ';
  analysis::Superposition fit;
  std::size_t fitted_atoms = 0;
};

// Row 0 of the match is the fixed reference (identity transform, rmsd 0).
// Every other row is fitted onto it by kabsch over CA atoms at columns that
// are non-gap in both rows; residues without a CA are skipped. Throws
// kInsufficientPoints when fewer than 3 pairs remain.
std::vector<StructureFit> superpose_by_alignment(const AlignmentMatch& match,
                                                 std::span<const Structure> structures);

}  // namespace mdstream::align
