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
#include <vector>

namespace mdstream::align {

struct Alignment {
  std::vector<std::string> names;
  // Gapped rows, uppercase letters and '-', all of length `length`.
  std::vector<std::string> rows;
  std::size_t length = 0;

  std::size_t size() const { return rows.size(); }
  std::string ungapped(std::size_t row) const;
};

// ClustalW (.aln). The first line must start with "CLUSTAL"; blocks of
// "name segment [count]" lines follow, separated by blank lines; consensus
// lines are skipped. Errors are kParse with a line number.
Alignment parse_clustal(std::string_view text);

}  // namespace mdstream::align
