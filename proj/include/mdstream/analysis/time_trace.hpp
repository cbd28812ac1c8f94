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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mdstream/core/frame_source.hpp"
#include "mdstream/core/model.hpp"

namespace mdstream::analysis {

enum class MeasurementKind { kDistance, kAngle, kDihedral, kRmsd };

std::string_view to_string(MeasurementKind kind);
std::string_view unit_of(MeasurementKind kind);

struct MeasurementSpec {
  MeasurementKind kind = MeasurementKind::kDistance;
  // Two, three or four atoms for the geometric kinds; the RMSD selection
  // otherwise, where nullopt means every atom.
  std::optional<std::vector<std::size_t>> atoms;
  std::size_t reference_frame = 0;
  bool superpose = true;

  static MeasurementSpec distance(std::size_t i, std::size_t j);
  static MeasurementSpec angle(std::size_t i, std::size_t j, std::size_t k);
  static MeasurementSpec dihedral(std::size_t i, std::size_t j, std::size_t k, std::size_t l);
  static MeasurementSpec rmsd(std::optional<std::vector<std::size_t>> selection,
                              std::size_t reference_frame = 0, bool superpose = true);

  // Throws kInvalidArgument naming the failed precondition.
  void validate(std::size_t n_atoms, std::size_t n_frames) const;

  friend bool operator==(const MeasurementSpec&, const MeasurementSpec&) = default;
};

enum class TraceOrder { kByFrame, kAscending, kDescending };

std::string_view to_string(TraceOrder order);
TraceOrder parse_order(std::string_view name);

struct TimeTrace {
  MeasurementSpec spec;
  std::vector<double> values;
  std::vector<std::int64_t> frame_numbers;
  std::vector<double> times_ps;
  TraceOrder order = TraceOrder::kByFrame;

  std::size_t size() const { return values.size(); }
  // Frame shown when the k-th plotted point is picked.
  std::int64_t frame_at(std::size_t k) const { return frame_numbers.at(k); }

  friend bool operator==(const TimeTrace&, const TimeTrace&) = default;
};

// Value of `spec` on a single frame; `reference` is required for RMSD.
double measure(const MeasurementSpec& spec, const Frame& frame, const Frame* reference = nullptr);

struct TraceOptions {
  // Frames are split into this many contiguous chunks evaluated concurrently.
  unsigned threads = 1;
};

// Evaluates `spec` on every frame, in frame order.
TimeTrace time_trace(const FrameSource& frames, const MeasurementSpec& spec, TraceOptions options = {});

// Same, after checking that the trajectory matches the structure's atom
// count (kMatch otherwise).
TimeTrace time_trace(const FrameSource& frames, const Structure& structure, const MeasurementSpec& spec,
                     TraceOptions options = {});

// Reorders (frame, value) pairs; ties keep frame order.
TimeTrace sort_trace(const TimeTrace& trace, TraceOrder order);

// Keeps pairs with min <= value <= max. Throws kInvalidArgument if min > max.
TimeTrace filter_trace(const TimeTrace& trace, double min, double max);

// {kind, atoms, unit, order, frames, times_ps, values}; RMSD adds reference_frame and superpose.
nlohmann::json to_json(const TimeTrace& trace);
nlohmann::json to_json(const MeasurementSpec& spec);
// Accepts {"kind": ..., "atoms": [..] | "all", "reference_frame": n, "superpose": b}.
MeasurementSpec spec_from_json(const nlohmann::json& j);

}  // namespace mdstream::analysis
