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
#include <bit>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mdstream/core/model.hpp"

namespace testsupport {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_bytes(const fs::path& path, const std::string& bytes);
std::string read_bytes(const fs::path& path);

// One frame as the reference tooling sees it: nm and ps, float32.
struct RefFrame {
  int step = 0;
  float time = 0;
  std::array<float, 9> box{};
  std::vector<float> x;  // 3 * natoms
};

// Encodes with the reference xdrfile writer.
void write_xtc_reference(const fs::path& path, const std::vector<RefFrame>& frames, float precision = 1000.0f);
// Decodes with the reference xdrfile reader.
std::vector<RefFrame> read_xtc_reference(const fs::path& path, int natoms);

// n_frames frames of `natoms` random atoms in a 0..extent nm box.
std::vector<RefFrame> random_ref_frames(std::size_t n_frames, std::size_t natoms, std::uint64_t seed,
                                        float extent = 5.0f);

// 100 frames of 12 atoms in which atoms 2 and 7 are 2.91 Å apart at frame
// 88 and between 3.5 and 6 Å everywhere else.
inline constexpr std::size_t kContactFrames = 100;
inline constexpr std::size_t kContactAtoms = 12;
inline constexpr std::size_t kContactFrame = 88;
std::vector<RefFrame> contact_frames();
std::string contact_pdb();

struct DcdOptions {
  std::endian order = std::endian::little;
  bool charmm = true;
  bool unit_cell = false;
  bool four_d = false;
  float delta = 0.0f;  // AKMA time units
  int nsavc = 1;
  std::optional<int> declared_frames;  // icntrl[0]; defaults to the real count
  std::string tag = "CORD";
  int fixed_atoms = 0;
};

// Frames are interleaved xyz in Å; cells are (A, gamma, B, beta, alpha, C).
void write_dcd(const fs::path& path, const DcdOptions& options, const std::vector<std::vector<float>>& frames,
               const std::vector<std::array<double, 6>>& cells = {});

struct PdbAtom {
  std::string name;
  std::string res_name;
  char chain = 'A';
  int res_seq = 1;
  double x = 0, y = 0, z = 0;
  std::string element;
  bool hetatm = false;
};

std::string pdb_line(int serial, const PdbAtom& a);
std::string pdb_text(const std::vector<PdbAtom>& atoms);

// One CA per residue in chain `chain`, at the given positions.
std::string ca_trace_pdb(const std::string& one_letter_sequence, const std::vector<mdstream::Vec3>& positions,
                         char chain = 'A');
std::string three_letter(char one_letter);

// Row-major proper rotation drawn uniformly (random unit quaternion).
std::array<double, 9> random_rotation(std::mt19937_64& rng);
mdstream::Vec3 rotate(const std::array<double, 9>& r, mdstream::Vec3 v);

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs argv to completion and captures both streams.
ProcessResult run_process(const std::vector<std::string>& argv, const std::vector<std::string>& extra_env = {});

// A child process whose stdout is read line by line.
class Child {
 public:
  Child(const std::vector<std::string>& argv, const std::vector<std::string>& extra_env = {});
  ~Child();
  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  // Next stdout line, or nullopt on EOF or after timeout_ms.
  std::optional<std::string> read_line(int timeout_ms = 10000);
  void signal(int sig);
  // Waits for exit and returns the status code (128 + signal when killed).
  int wait();
  int pid() const { return pid_; }

 private:
  int pid_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
  bool reaped_ = false;
  int status_ = -1;
};

// Reads "listening on host:PORT" from a serve child.
int read_listen_port(Child& child);

}  // namespace testsupport
