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

#include <string>
#include <string_view>

#include "mdstream/core/model.hpp"

namespace mdstream {

// Parses the first model of a PDB v3.3 file. ATOM and HETATM records are
// both kept; only altLoc ' ' and 'A' survive.
Structure parse_pdb(std::string_view text, std::string id = "structure");

// ATOM/HETATM records for every atom, coordinates at 3 decimals.
std::string write_pdb(const Structure& structure);

// One-letter sequence of a chain in file order; non-standard residues are 'X'.
std::string chain_sequence(const Structure& structure, char chain_id);

char one_letter_code(std::string_view residue_name);

}  // namespace mdstream
