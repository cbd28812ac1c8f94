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

#include "support.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

extern "C" {
#include "xdrfile.h"
#include "xdrfile_xtc.h"
}

extern char** environ;

namespace testsupport {

TempDir::TempDir() {
  const char* base = std::getenv("TMPDIR");
  std::string tmpl = std::string(base ? base : "/tmp") + "/mdstream-test-XXXXXX";
  if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_xtc_reference(const fs::path& path, const std::vector<RefFrame>& frames, float precision) {
  XDRFILE* xd = xdrfile_open(path.c_str(), "w");
  if (xd == nullptr) throw std::runtime_error("xdrfile_open failed for " + path.string());
  for (const auto& f : frames) {
    matrix box;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) box[r][c] = f.box[3 * r + c];
    std::vector<float> x = f.x;
    const int natoms = static_cast<int>(x.size() / 3);
    if (write_xtc(xd, natoms, f.step, f.time, box, reinterpret_cast<rvec*>(x.data()), precision) != exdrOK) {
      xdrfile_close(xd);
      throw std::runtime_error("write_xtc failed");
    }
  }
  xdrfile_close(xd);
}

std::vector<RefFrame> read_xtc_reference(const fs::path& path, int natoms) {
  XDRFILE* xd = xdrfile_open(path.c_str(), "r");
  if (xd == nullptr) throw std::runtime_error("xdrfile_open failed for " + path.string());
  std::vector<RefFrame> out;
  for (;;) {
    RefFrame f;
    f.x.resize(3 * static_cast<std::size_t>(natoms));
    matrix box;
    float prec = 0;
    const int rc = read_xtc(xd, natoms, &f.step, &f.time, box, reinterpret_cast<rvec*>(f.x.data()), &prec);
    if (rc != exdrOK) break;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) f.box[3 * r + c] = box[r][c];
    out.push_back(std::move(f));
  }
  xdrfile_close(xd);
  return out;
}

std::vector<RefFrame> random_ref_frames(std::size_t n_frames, std::size_t natoms, std::uint64_t seed, float extent) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> pos(0.0f, extent);
  std::normal_distribution<float> step(0.0f, 0.01f);
  std::vector<RefFrame> frames(n_frames);
  std::vector<float> x(3 * natoms);
  for (auto& v : x) v = pos(rng);
  for (std::size_t i = 0; i < n_frames; ++i) {
    for (auto& v : x) v += step(rng);
    frames[i].step = static_cast<int>(i * 10);
    frames[i].time = static_cast<float>(i) * 0.5f;
    frames[i].box = {extent, 0, 0, 0, extent, 0, 0, 0, extent};
    frames[i].x = x;
  }
  return frames;
}

std::vector<RefFrame> contact_frames() {
  std::vector<RefFrame> frames(kContactFrames);
  for (std::size_t f = 0; f < kContactFrames; ++f) {
    auto& fr = frames[f];
    fr.step = static_cast<int>(f * 1000);
    fr.time = static_cast<float>(f) * 2.0f;
    fr.box = {4, 0, 0, 0, 4, 0, 0, 0, 4};
    for (std::size_t i = 0; i < kContactAtoms; ++i) {
      fr.x.insert(fr.x.end(), {0.3f * static_cast<float>(i), 0.5f + 0.01f * static_cast<float>(f % 7), 1.0f});
    }
    // Coordinates on the 0.001 nm grid survive compression exactly.
    const float gap = f == kContactFrame ? 0.291f : 0.35f + 0.001f * static_cast<float>((f * 37) % 250);
    fr.x[3 * 2 + 0] = 1.0f;
    fr.x[3 * 2 + 1] = 1.0f;
    fr.x[3 * 2 + 2] = 1.0f;
    fr.x[3 * 7 + 0] = 1.0f + gap;
    fr.x[3 * 7 + 1] = 1.0f;
    fr.x[3 * 7 + 2] = 1.0f;
  }
  return frames;
}

std::string contact_pdb() {
  const auto first = contact_frames().front();
  std::vector<PdbAtom> atoms;
  for (std::size_t i = 0; i < kContactAtoms; ++i) {
    atoms.push_back({"CA", "GLY", 'A', static_cast<int>(i + 1), 10.0 * first.x[3 * i], 10.0 * first.x[3 * i + 1],
                     10.0 * first.x[3 * i + 2], "C"});
  }
  return pdb_text(atoms);
}

namespace {

template <class T>
void put(std::string& out, T v, std::endian order) {
  auto bits = std::bit_cast<std::array<char, sizeof(T)>>(v);
  if (order != std::endian::native) std::reverse(bits.begin(), bits.end());
  out.append(bits.data(), bits.size());
}

void fortran_record(std::string& out, const std::string& payload, std::endian order) {
  put<std::int32_t>(out, static_cast<std::int32_t>(payload.size()), order);
  out += payload;
  put<std::int32_t>(out, static_cast<std::int32_t>(payload.size()), order);
}

}  // namespace

void write_dcd(const fs::path& path, const DcdOptions& o, const std::vector<std::vector<float>>& frames,
               const std::vector<std::array<double, 6>>& cells) {
  const std::size_t natoms = frames.empty() ? 0 : frames.front().size() / 3;
  std::string out;
  {
    std::string hdr = o.tag.substr(0, 4);
    std::int32_t icntrl[20] = {};
    icntrl[0] = o.declared_frames.value_or(static_cast<int>(frames.size()));
    icntrl[1] = 0;
    icntrl[2] = o.nsavc;
    icntrl[3] = o.nsavc * static_cast<int>(frames.size());
    icntrl[8] = o.fixed_atoms;
    if (o.charmm) {
      icntrl[10] = o.unit_cell ? 1 : 0;
      icntrl[11] = o.four_d ? 1 : 0;
      icntrl[19] = 24;
    }
    for (int k = 0; k < 20; ++k) {
      if (k == 9 && o.charmm) {
        put<float>(hdr, o.delta, o.order);
      } else if (k == 9 && !o.charmm) {
        put<double>(hdr, static_cast<double>(o.delta), o.order);
        ++k;
      } else {
        put<std::int32_t>(hdr, icntrl[k], o.order);
      }
    }
    fortran_record(out, hdr, o.order);
  }
  {
    std::string title;
    put<std::int32_t>(title, 2, o.order);
    std::string line1 = "REMARKS test fixture";
    std::string line2 = "REMARKS second line";
    line1.resize(80, ' ');
    line2.resize(80, ' ');
    title += line1 + line2;
    fortran_record(out, title, o.order);
  }
  {
    std::string n;
    put<std::int32_t>(n, static_cast<std::int32_t>(natoms), o.order);
    fortran_record(out, n, o.order);
  }
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (o.charmm && o.unit_cell) {
      std::string cell;
      const auto c = f < cells.size() ? cells[f] : std::array<double, 6>{10, 90, 10, 90, 90, 10};
      for (double v : c) put<double>(cell, v, o.order);
      fortran_record(out, cell, o.order);
    }
    for (int axis = 0; axis < (o.four_d ? 4 : 3); ++axis) {
      std::string rec;
      for (std::size_t i = 0; i < natoms; ++i) put<float>(rec, axis < 3 ? frames[f][3 * i + axis] : 0.0f, o.order);
      fortran_record(out, rec, o.order);
    }
  }
  write_bytes(path, out);
}

std::string pdb_line(int serial, const PdbAtom& a) {
  char buf[96];
  // Atom names shorter than four characters start in column 14.
  std::string name = a.name.size() < 4 ? " " + a.name : a.name;
  std::snprintf(buf, sizeof buf, "%-6s%5d %-4s %3s %c%4d    %8.3f%8.3f%8.3f%6.2f%6.2f          %2s",
                a.hetatm ? "HETATM" : "ATOM", serial, name.c_str(), a.res_name.c_str(), a.chain, a.res_seq, a.x, a.y,
                a.z, 1.0, 0.0, a.element.c_str());
  return buf;
}

std::string pdb_text(const std::vector<PdbAtom>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) out += pdb_line(static_cast<int>(i + 1), atoms[i]) + "\n";
  out += "END\n";
  return out;
}

std::string three_letter(char c) {
  static const std::pair<char, const char*> table[] = {
      {'A', "ALA"}, {'R', "ARG"}, {'N', "ASN"}, {'D', "ASP"}, {'C', "CYS"}, {'Q', "GLN"}, {'E', "GLU"},
      {'G', "GLY"}, {'H', "HIS"}, {'I', "ILE"}, {'L', "LEU"}, {'K', "LYS"}, {'M', "MET"}, {'F', "PHE"},
      {'P', "PRO"}, {'S', "SER"}, {'T', "THR"}, {'W', "TRP"}, {'Y', "TYR"}, {'V', "VAL"}};
  for (const auto& [k, v] : table) {
    if (k == c) return v;
  }
  return "UNK";
}

std::string ca_trace_pdb(const std::string& seq, const std::vector<mdstream::Vec3>& positions, char chain) {
  std::vector<PdbAtom> atoms;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    atoms.push_back({"CA", three_letter(seq[i]), chain, static_cast<int>(i + 1), positions[i].x, positions[i].y,
                     positions[i].z, "C"});
  }
  return pdb_text(atoms);
}

std::array<double, 9> random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  double w = n(rng), x = n(rng), y = n(rng), z = n(rng);
  const double s = std::sqrt(w * w + x * x + y * y + z * z);
  w /= s, x /= s, y /= s, z /= s;
  return {1 - 2 * (y * y + z * z), 2 * (x * y - z * w),     2 * (x * z + y * w),
          2 * (x * y + z * w),     1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
          2 * (x * z - y * w),     2 * (y * z + x * w),     1 - 2 * (x * x + y * y)};
}

mdstream::Vec3 rotate(const std::array<double, 9>& r, mdstream::Vec3 v) {
  return {r[0] * v.x + r[1] * v.y + r[2] * v.z, r[3] * v.x + r[4] * v.y + r[5] * v.z,
          r[6] * v.x + r[7] * v.y + r[8] * v.z};
}

namespace {

std::vector<std::string> merged_env(const std::vector<std::string>& extra) {
  std::vector<std::string> env;
  for (char** e = environ; *e != nullptr; ++e) env.emplace_back(*e);
  for (const auto& kv : extra) {
    const auto key = kv.substr(0, kv.find('=') + 1);
    std::erase_if(env, [&](const std::string& s) { return s.rfind(key, 0) == 0; });
    env.push_back(kv);
  }
  return env;
}

std::vector<char*> c_strings(std::vector<std::string>& v) {
  std::vector<char*> out;
  for (auto& s : v) out.push_back(s.data());
  out.push_back(nullptr);
  return out;
}

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

void drain(int fd, std::string& into) {
  char buf[4096];
  ssize_t n;
  while ((n = ::read(fd, buf, sizeof buf)) > 0) into.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv_in, const std::vector<std::string>& extra_env) {
  std::vector<std::string> argv = argv_in;
  auto env = merged_env(extra_env);
  auto cargv = c_strings(argv);
  auto cenv = c_strings(env);
  int out_pipe[2], err_pipe[2];
  if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) throw std::runtime_error("pipe failed");
  const pid_t pid = ::fork();
  if (pid == 0) {
    ::dup2(out_pipe[1], 1);
    ::dup2(err_pipe[1], 2);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    ::execve(cargv[0], cargv.data(), cenv.data());
    ::_exit(127);
  }
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  ProcessResult r;
  // Read both pipes without deadlocking on a full buffer.
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  while (open_fds > 0) {
    ::poll(fds, 2, -1);
    for (int k = 0; k < 2; ++k) {
      if (fds[k].fd < 0 || !(fds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      char buf[65536];
      const ssize_t n = ::read(fds[k].fd, buf, sizeof buf);
      if (n <= 0) {
        ::close(fds[k].fd);
        fds[k].fd = -1;
        --open_fds;
      } else {
        (k == 0 ? r.out : r.err).append(buf, static_cast<std::size_t>(n));
      }
    }
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  r.exit_code = decode_status(status);
  return r;
}

Child::Child(const std::vector<std::string>& argv_in, const std::vector<std::string>& extra_env) {
  std::vector<std::string> argv = argv_in;
  auto env = merged_env(extra_env);
  auto cargv = c_strings(argv);
  auto cenv = c_strings(env);
  int out_pipe[2];
  if (::pipe(out_pipe) != 0) throw std::runtime_error("pipe failed");
  pid_ = ::fork();
  if (pid_ == 0) {
    ::dup2(out_pipe[1], 1);
    ::close(out_pipe[0]);
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, 2);
    ::execve(cargv[0], cargv.data(), cenv.data());
    ::_exit(127);
  }
  ::close(out_pipe[1]);
  out_fd_ = out_pipe[0];
}

Child::~Child() {
  if (!reaped_ && pid_ > 0) {
    ::kill(pid_, SIGKILL);
    wait();
  }
  if (out_fd_ >= 0) ::close(out_fd_);
}

std::optional<std::string> Child::read_line(int timeout_ms) {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
    if (left <= 0) return std::nullopt;
    pollfd p{out_fd_, POLLIN, 0};
    if (::poll(&p, 1, static_cast<int>(left)) <= 0) return std::nullopt;
    char buf[4096];
    const ssize_t n = ::read(out_fd_, buf, sizeof buf);
    if (n <= 0) return std::nullopt;
    buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

void Child::signal(int sig) {
  if (!reaped_) ::kill(pid_, sig);
}

int Child::wait() {
  if (!reaped_) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
    status_ = decode_status(status);
    reaped_ = true;
    if (out_fd_ >= 0) drain(out_fd_, buffer_);
  }
  return status_;
}

int read_listen_port(Child& child) {
  static const std::regex re(R"(listening on .*:(\d+))");
  for (int k = 0; k < 20; ++k) {
    const auto line = child.read_line();
    if (!line) break;
    std::smatch m;
    if (std::regex_search(*line, m, re)) return std::stoi(m[1]);
  }
  throw std::runtime_error("server did not report a port");
}

}  // namespace testsupport
