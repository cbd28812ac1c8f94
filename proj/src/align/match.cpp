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

#include "mdstream/align/match.hpp"

#include <algorithm>
#include <cstdio>

#include "mdstream/core/error.hpp"
#include "mdstream/core/pdb.hpp"

namespace mdstream::align {
namespace {

struct Candidate {
  std::size_t structure = 0;
  char chain = ' ';
  double identity = 0;
  bool exact = false;
  bool name_match = false;
};

// Ranking: exact before identity, name match before none, then identity.
bool better(const Candidate& a, const Candidate& b) {
  if (a.exact != b.exact) return a.exact;
  if (a.name_match != b.name_match) return a.name_match;
  return a.identity > b.identity;
}

double identity(const std::string& a, const std::string& b) {
  if (a.size() != b.size() || a.empty()) return 0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace

std::vector<std::size_t> chain_residues(const Structure& structure, char chain_id) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < structure.residues.size(); ++r) {
    if (structure.residues[r].chain_id == chain_id) out.push_back(r);
  }
  return out;
}

AlignmentMatch match_alignment(const Alignment& alignment, std::span<const Structure> structures,
                               const MatchOptions& options) {
  if (structures.size() < 2) fail(ErrorCode::kInvalidArgument, "alignment matching needs at least 2 structures");

  std::vector<std::vector<std::string>> sequences(structures.size());
  for (std::size_t s = 0; s < structures.size(); ++s) {
    for (char c : structures[s].chains) sequences[s].push_back(chain_sequence(structures[s], c));
  }

  AlignmentMatch match;
  std::vector<std::pair<std::size_t, char>> claimed;
  for (std::size_t row = 0; row < alignment.size(); ++row) {
    const std::string seq = alignment.ungapped(row);
    const std::string& name = alignment.names[row];

    std::vector<Candidate> candidates;
    double best_identity = 0;
    for (std::size_t s = 0; s < structures.size(); ++s) {
      for (std::size_t c = 0; c < structures[s].chains.size(); ++c) {
        Candidate cand{s, structures[s].chains[c], 0, false, structures[s].id == name};
        cand.exact = sequences[s][c] == seq;
        cand.identity = cand.exact ? 1.0 : identity(seq, sequences[s][c]);
        best_identity = std::max(best_identity, cand.identity);
        if (cand.exact || cand.identity >= options.min_identity) candidates.push_back(cand);
      }
    }
    if (candidates.empty()) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "' matches no structure chain at >= %g%% identity (best %g%%)",
                    options.min_identity * 100, best_identity * 100);
      fail(ErrorCode::kMatch, "alignment row '" + name + buf);
    }
    std::stable_sort(candidates.begin(), candidates.end(), better);
    const Candidate* chosen = nullptr;
    for (const auto& c : candidates) {
      const bool taken = std::find(claimed.begin(), claimed.end(), std::pair{c.structure, c.chain}) != claimed.end();
      if (!taken) {
        chosen = &c;
        break;
      }
    }
    if (chosen == nullptr) {
      const Candidate& best = candidates.front();
      fail(ErrorCode::kAmbiguous, "alignment row '" + name + "' claims chain " + std::string(1, best.chain) +
                                      " of structure '" + structures[best.structure].id +
                                      "', already matched by another row");
    }
    claimed.emplace_back(chosen->structure, chosen->chain);

    RowMatch m;
    m.row = row;
    m.row_name = name;
    m.structure_index = chosen->structure;
    m.structure_id = structures[chosen->structure].id;
    m.chain_id = chosen->chain;
    m.identity = chosen->identity;
    const auto residues = chain_residues(structures[chosen->structure], chosen->chain);
    m.column_to_residue.resize(alignment.length);
    std::size_t k = 0;
    for (std::size_t col = 0; col < alignment.length; ++col) {
      if (alignment.rows[row][col] != '-') m.column_to_residue[col] = residues.at(k++);
    }
    match.rows.push_back(std::move(m));
  }
  return match;
}

std::vector<StructureFit> superpose_by_alignment(const AlignmentMatch& match,
                                                 std::span<const Structure> structures) {
  if (match.rows.size() < 2) fail(ErrorCode::kInvalidArgument, "superposition needs at least 2 matched rows");
  const RowMatch& ref = match.rows.front();
  const Structure& ref_structure = structures[ref.structure_index];

  std::vector<StructureFit> fits;
  fits.push_back({ref.structure_id, ref.chain_id, {}, 0});
  for (std::size_t r = 1; r < match.rows.size(); ++r) {
    const RowMatch& row = match.rows[r];
    const Structure& structure = structures[row.structure_index];
    std::vector<double> moving, target;
    const std::size_t columns = std::min(ref.column_to_residue.size(), row.column_to_residue.size());
    for (std::size_t col = 0; col < columns; ++col) {
      if (!ref.column_to_residue[col] || !row.column_to_residue[col]) continue;
      const auto a = structure.find_atom(*row.column_to_residue[col], "CA");
      const auto b = ref_structure.find_atom(*ref.column_to_residue[col], "CA");
      if (a < 0 || b < 0) continue;
      const Vec3 p = structure.reference_coords[static_cast<std::size_t>(a)];
      const Vec3 q = ref_structure.reference_coords[static_cast<std::size_t>(b)];
      moving.insert(moving.end(), {p.x, p.y, p.z});
      target.insert(target.end(), {q.x, q.y, q.z});
    }
    const std::size_t n = moving.size() / 3;
    if (n < 3) {
      fail(ErrorCode::kInsufficientPoints, "structure '" + row.structure_id + "' shares " + std::to_string(n) +
                                               " CA positions with the reference, need 3");
    }
    fits.push_back({row.structure_id, row.chain_id,
                    analysis::kabsch(Coords(std::move(moving)), Coords(std::move(target))), n});
  }
  return fits;
}

}  // namespace mdstream::align
