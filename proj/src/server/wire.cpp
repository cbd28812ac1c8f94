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

#include "mdstream/server/wire.hpp"

#include <bit>
#include <charconv>
#include <cstring>

#include "mdstream/core/error.hpp"
#include "mdstream/simd/kernels.hpp"

namespace mdstream::server {
namespace {

static_assert(std::endian::native == std::endian::little, "wire encoder assumes a little-endian host");

void put_f32(std::string& out, std::size_t at, float v) { std::memcpy(out.data() + at, &v, 4); }

std::string header(const Frame& frame, std::size_t n_coords) {
  std::string out(payload_size(n_coords), '\0');
  put_f32(out, 0, static_cast<float>(frame.time_ps));
  for (std::size_t k = 0; k < 9; ++k) put_f32(out, 4 + 4 * k, static_cast<float>(frame.box[k]));
  const auto n = static_cast<std::int32_t>(n_coords);
  std::memcpy(out.data() + 40, &n, 4);
  return out;
}

}  // namespace

std::size_t payload_size(std::size_t n_coords) { return kWireHeaderBytes + 12 * n_coords; }

std::string encode_frame(const Frame& frame) {
  std::string out = header(frame, frame.atom_count());
  std::vector<float> xyz(3 * frame.atom_count());
  simd::narrow(frame.coords.flat(), xyz);
  if (!xyz.empty()) std::memcpy(out.data() + kWireHeaderBytes, xyz.data(), 4 * xyz.size());
  return out;
}

std::string encode_frame(const Frame& frame, const Selection& atoms) {
  std::string out = header(frame, atoms.size());
  std::size_t at = kWireHeaderBytes;
  for (std::size_t i : atoms.indices()) {
    const Vec3 p = frame.coords[i];
    put_f32(out, at, static_cast<float>(p.x));
    put_f32(out, at + 4, static_cast<float>(p.y));
    put_f32(out, at + 8, static_cast<float>(p.z));
    at += 12;
  }
  return out;
}

std::string subset_payload(std::string_view full, const Selection& atoms) {
  const std::size_t have = full.size() < kWireHeaderBytes ? 0 : (full.size() - kWireHeaderBytes) / 12;
  if (full.size() < kWireHeaderBytes || (!atoms.empty() && atoms.indices().back() >= have)) {
    fail(ErrorCode::kInvalidArgument, "atom subset exceeds the payload's " + std::to_string(have) + " atoms");
  }
  std::string out(payload_size(atoms.size()), '\0');
  std::memcpy(out.data(), full.data(), 40);
  const auto n = static_cast<std::int32_t>(atoms.size());
  std::memcpy(out.data() + 40, &n, 4);
  std::size_t at = kWireHeaderBytes;
  for (std::size_t i : atoms.indices()) {
    std::memcpy(out.data() + at, full.data() + kWireHeaderBytes + 12 * i, 12);
    at += 12;
  }
  return out;
}

WireFrame decode_payload(std::string_view payload) {
  if (payload.size() < kWireHeaderBytes) fail(ErrorCode::kProtocol, "frame payload shorter than its header");
  WireFrame f;
  std::memcpy(&f.time_ps, payload.data(), 4);
  std::memcpy(f.box.data(), payload.data() + 4, 36);
  std::int32_t n = 0;
  std::memcpy(&n, payload.data() + 40, 4);
  if (n < 0 || payload.size() != payload_size(static_cast<std::size_t>(n))) {
    fail(ErrorCode::kProtocol, "frame payload length does not match n_coords=" + std::to_string(n));
  }
  f.coords.resize(3 * static_cast<std::size_t>(n));
  if (n > 0) std::memcpy(f.coords.data(), payload.data() + kWireHeaderBytes, 4 * f.coords.size());
  return f;
}

Selection parse_atom_list(std::string_view csv, std::size_t n_atoms) {
  if (csv.empty()) fail(ErrorCode::kInvalidArgument, "empty atom list");
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', pos), csv.size());
    const std::string_view tok = csv.substr(pos, comma - pos);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      fail(ErrorCode::kInvalidArgument, "atom list entry '" + std::string(tok) + "' is not an index");
    }
    if (v >= n_atoms) {
      fail(ErrorCode::kInvalidArgument,
           "atom index " + std::to_string(v) + " out of range for " + std::to_string(n_atoms) + " atoms");
    }
    if (!out.empty() && v <= out.back()) fail(ErrorCode::kInvalidArgument, "atom list must be strictly ascending");
    out.push_back(v);
    pos = comma + 1;
  }
  return Selection(std::move(out));
}

}  // namespace mdstream::server
