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

#include "mdstream/align/clustal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "mdstream/core/error.hpp"

namespace mdstream::align {
namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::kParse, "clustal line " + std::to_string(line_no) + ": " + what);
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

bool is_consensus(std::string_view line) {
  return !line.empty() && std::isspace(static_cast<unsigned char>(line.front())) &&
         std::all_of(line.begin(), line.end(), [](char c) {
           return c == ' ' || c == '\t' || c == '.' || c == ':' || c == '*';
         });
}

}  // namespace

std::string Alignment::ungapped(std::size_t row) const {
  std::string s;
  for (char c : rows.at(row)) {
    if (c != '-') s += c;
  }
  return s;
}

Alignment parse_clustal(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
    }
  }
  if (lines.empty() || lines.front().rfind("CLUSTAL", 0) != 0) {
    fail(ErrorCode::kParse, "clustal line 1: missing CLUSTAL header");
  }

  Alignment aln;
  std::unordered_map<std::string, std::size_t> row_of;
  std::vector<std::string> block;  // names in the current block, in order
  std::size_t block_count = 0;

  auto close_block = [&](std::size_t line_no) {
    if (block.empty()) return;
    if (block_count > 0 && block != aln.names) {
      parse_error(line_no, "block lists sequences differently from the first block");
    }
    ++block_count;
    block.clear();
  };

  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::string& line = lines[k];
    const std::size_t line_no = k + 1;
    if (is_blank(line)) {
      close_block(line_no);
      continue;
    }
    if (is_consensus(line)) continue;

    std::istringstream fields(line);
    std::string name, segment, count;
    fields >> name >> segment >> count;
    std::string extra;
    if (segment.empty()) parse_error(line_no, "sequence line without a segment");
    if (fields >> extra) parse_error(line_no, "unexpected trailing field '" + extra + "'");
    if (!count.empty()) {
      int n = 0;
      const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
      if (ec != std::errc{} || ptr != count.data() + count.size()) {
        parse_error(line_no, "residue count '" + count + "' is not an integer");
      }
    }
    for (char& c : segment) {
      if (c == '-' || c == '.') {
        c = '-';
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      } else {
        parse_error(line_no, std::string("invalid residue character '") + c + "'");
      }
    }
    if (std::find(block.begin(), block.end(), name) != block.end()) {
      parse_error(line_no, "sequence '" + name + "' appears twice in one block");
    }
    block.push_back(name);

    auto it = row_of.find(name);
    if (it == row_of.end()) {
      if (block_count > 0) parse_error(line_no, "sequence '" + name + "' missing from the first block");
      it = row_of.emplace(name, aln.rows.size()).first;
      aln.names.push_back(name);
      aln.rows.emplace_back();
    }
    aln.rows[it->second] += segment;
  }
  close_block(lines.size());

  if (aln.rows.empty()) fail(ErrorCode::kParse, "clustal: no sequences");
  aln.length = aln.rows.front().size();
  for (std::size_t r = 0; r < aln.rows.size(); ++r) {
    if (aln.rows[r].size() != aln.length) {
      fail(ErrorCode::kParse, "clustal: row '" + aln.names[r] + "' has length " +
                                  std::to_string(aln.rows[r].size()) + ", expected " + std::to_string(aln.length));
    }
  }
  return aln;
}

}  // namespace mdstream::align
