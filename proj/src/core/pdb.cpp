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

#include "mdstream/core/pdb.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <unordered_set>
#include <utility>

#include "mdstream/core/error.hpp"

namespace mdstream {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// 1-based inclusive column range, clipped to the line.
std::string_view columns(std::string_view line, std::size_t first, std::size_t last) {
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

[[noreturn]] void field_error(std::size_t line_no, const char* field, std::string_view value) {
  fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": malformed " + field + " field '" +
                              std::string(value) + "'");
}

int parse_int_field(std::string_view line, std::size_t first, std::size_t last,
                    std::size_t line_no, const char* field) {
  const std::string_view raw = columns(line, first, last);
  const std::string_view s = trim(raw);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    field_error(line_no, field, raw);
  }
  return value;
}

double parse_real_field(std::string_view line, std::size_t first, std::size_t last,
                        std::size_t line_no, const char* field) {
  const std::string_view raw = columns(line, first, last);
  const std::string_view s = trim(raw);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    field_error(line_no, field, raw);
  }
  return value;
}

std::string element_from_name(std::string_view name) {
  for (char c : name) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return {};
}

bool starts_with_record(std::string_view line, std::string_view tag) {
  return line.substr(0, tag.size()) == tag;
}

}  // namespace

Structure parse_pdb(std::string_view text, std::string id) {
  Structure s;
  s.id = std::move(id);
  std::vector<double> xyz;
  std::unordered_set<int> serials;

  struct ResidueKey {
    char chain;
    int seq;
    char icode;
    std::string name;
    bool operator==(const ResidueKey&) const = default;
  };
  ResidueKey current{};
  bool have_residue = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (starts_with_record(line, "ENDMDL") || trim(line) == "END" ||
        starts_with_record(line, "END ")) {
      break;
    }
    const bool is_atom = starts_with_record(line, "ATOM  ") || starts_with_record(line, "ATOM") ||
                         starts_with_record(line, "HETATM");
    if (!is_atom) continue;

    const char alt_loc = line.size() >= 17 ? line[16] : ' ';
    if (alt_loc != ' ' && alt_loc != 'A') continue;

    Atom atom;
    atom.serial = parse_int_field(line, 7, 11, line_no, "serial");
    atom.name = std::string(trim(columns(line, 13, 16)));
    const std::string res_name(trim(columns(line, 18, 20)));
    const char chain = line.size() >= 22 ? line[21] : ' ';
    const int seq = parse_int_field(line, 23, 26, line_no, "resSeq");
    const char icode = line.size() >= 27 ? line[26] : ' ';
    const double x = parse_real_field(line, 31, 38, line_no, "x");
    const double y = parse_real_field(line, 39, 46, line_no, "y");
    const double z = parse_real_field(line, 47, 54, line_no, "z");
    atom.element = std::string(trim(columns(line, 77, 78)));
    if (atom.element.empty()) atom.element = element_from_name(atom.name);

    if (!serials.insert(atom.serial).second) {
      fail(ErrorCode::kParse,
           "line " + std::to_string(line_no) + ": duplicate atom serial " + std::to_string(atom.serial));
    }

    ResidueKey key{chain, seq, icode, res_name};
    if (!have_residue || !(key == current)) {
      if (have_residue) s.residues.back().atom_range.end = s.atoms.size();
      Residue r;
      r.name = res_name;
      r.seq_id = seq;
      r.chain_id = chain;
      r.atom_range = {s.atoms.size(), s.atoms.size()};
      s.residues.push_back(std::move(r));
      if (!s.has_chain(chain)) s.chains.push_back(chain);
      current = std::move(key);
      have_residue = true;
    }
    atom.residue_index = s.residues.size() - 1;
    s.atoms.push_back(std::move(atom));
    xyz.insert(xyz.end(), {x, y, z});
  }

  if (s.atoms.empty()) fail(ErrorCode::kEmptyStructure, "no ATOM/HETATM records in first model");
  s.residues.back().atom_range.end = s.atoms.size();
  s.reference_coords = Coords(std::move(xyz));
  return s;
}

std::string write_pdb(const Structure& structure) {
  std::string out;
  out.reserve(structure.atoms.size() * 81);
  char line[96];
  for (std::size_t i = 0; i < structure.atoms.size(); ++i) {
    const Atom& a = structure.atoms[i];
    const Residue& r = structure.residues[a.residue_index];
    const Vec3 p = structure.reference_coords[i];
    // Four-character names start in column 13, shorter ones in column 14.
    char name[5];
    if (a.name.size() >= 4) {
      std::snprintf(name, sizeof name, "%-4.4s", a.name.c_str());
    } else {
      std::snprintf(name, sizeof name, " %-3s", a.name.c_str());
    }
    std::snprintf(line, sizeof line,
                  "ATOM  %5d %4s %3.3s %c%4d    %8.3f%8.3f%8.3f  1.00  0.00          %2.2s\n",
                  a.serial, name, r.name.c_str(), r.chain_id, r.seq_id, p.x, p.y, p.z,
                  a.element.c_str());
    out += line;
  }
  out += "END\n";
  return out;
}

char one_letter_code(std::string_view residue_name) {
  static constexpr std::array<std::pair<std::string_view, char>, 20> kTable{{
      {"ALA", 'A'}, {"ARG", 'R'}, {"ASN", 'N'}, {"ASP", 'D'}, {"CYS", 'C'},
      {"GLN", 'Q'}, {"GLU", 'E'}, {"GLY", 'G'}, {"HIS", 'H'}, {"ILE", 'I'},
      {"LEU", 'L'}, {"LYS", 'K'}, {"MET", 'M'}, {"PHE", 'F'}, {"PRO", 'P'},
      {"SER", 'S'}, {"THR", 'T'}, {"TRP", 'W'}, {"TYR", 'Y'}, {"VAL", 'V'},
  }};
  for (const auto& [name, code] : kTable) {
    if (name == residue_name) return code;
  }
  return 'X';
}

std::string chain_sequence(const Structure& structure, char chain_id) {
  if (!structure.has_chain(chain_id)) {
    fail(ErrorCode::kNotFound, std::string("chain '") + chain_id + "' not in structure " + structure.id);
  }
  std::string seq;
  for (const Residue& r : structure.residues) {
    if (r.chain_id == chain_id) seq += one_letter_code(r.name);
  }
  return seq;
}

}  // namespace mdstream
