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

#include "mdstream/analysis/time_trace.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <set>

#include "mdstream/analysis/geometry.hpp"
#include "mdstream/analysis/superpose.hpp"
#include "mdstream/core/error.hpp"

namespace mdstream::analysis {
namespace {

std::size_t arity(MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::kDistance: return 2;
    case MeasurementKind::kAngle: return 3;
    case MeasurementKind::kDihedral: return 4;
    case MeasurementKind::kRmsd: return 0;
  }
  return 0;
}

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::kInvalidArgument, what); }

}  // namespace

std::string_view to_string(MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::kDistance: return "distance";
    case MeasurementKind::kAngle: return "angle";
    case MeasurementKind::kDihedral: return "dihedral";
    case MeasurementKind::kRmsd: return "rmsd";
  }
  return "?";
}

std::string_view unit_of(MeasurementKind kind) {
  return kind == MeasurementKind::kAngle || kind == MeasurementKind::kDihedral ? "degree" : "angstrom";
}

std::string_view to_string(TraceOrder order) {
  switch (order) {
    case TraceOrder::kByFrame: return "frame";
    case TraceOrder::kAscending: return "ascending";
    case TraceOrder::kDescending: return "descending";
  }
  return "?";
}

TraceOrder parse_order(std::string_view name) {
  if (name == "frame" || name == "by_frame") return TraceOrder::kByFrame;
  if (name == "ascending" || name == "asc") return TraceOrder::kAscending;
  if (name == "descending" || name == "desc") return TraceOrder::kDescending;
  invalid("unknown trace order '" + std::string(name) + "'");
}

MeasurementSpec MeasurementSpec::distance(std::size_t i, std::size_t j) {
  return {MeasurementKind::kDistance, std::vector<std::size_t>{i, j}};
}

MeasurementSpec MeasurementSpec::angle(std::size_t i, std::size_t j, std::size_t k) {
  return {MeasurementKind::kAngle, std::vector<std::size_t>{i, j, k}};
}

MeasurementSpec MeasurementSpec::dihedral(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  return {MeasurementKind::kDihedral, std::vector<std::size_t>{i, j, k, l}};
}

MeasurementSpec MeasurementSpec::rmsd(std::optional<std::vector<std::size_t>> selection,
                                      std::size_t reference_frame, bool superpose) {
  return {MeasurementKind::kRmsd, std::move(selection), reference_frame, superpose};
}

void MeasurementSpec::validate(std::size_t n_atoms, std::size_t n_frames) const {
  const std::string name(to_string(kind));
  if (kind == MeasurementKind::kRmsd) {
    if (reference_frame >= n_frames) {
      invalid("rmsd reference_frame " + std::to_string(reference_frame) + " >= frame count " +
              std::to_string(n_frames));
    }
    if (!atoms) return;
    if (atoms->empty()) invalid("rmsd selection is empty");
    for (std::size_t k = 1; k < atoms->size(); ++k) {
      if ((*atoms)[k] <= (*atoms)[k - 1]) invalid("rmsd selection must be strictly ascending");
    }
    if (atoms->back() >= n_atoms) {
      invalid("atom index " + std::to_string(atoms->back()) + " >= atom count " + std::to_string(n_atoms));
    }
    if (superpose && atoms->size() < 3) invalid("superposed rmsd needs at least 3 atoms");
    return;
  }
  if (!atoms || atoms->size() != arity(kind)) {
    invalid(name + " needs exactly " + std::to_string(arity(kind)) + " atoms");
  }
  std::set<std::size_t> seen;
  for (std::size_t a : *atoms) {
    if (a >= n_atoms) invalid("atom index " + std::to_string(a) + " >= atom count " + std::to_string(n_atoms));
    if (!seen.insert(a).second) invalid(name + " atoms must be distinct");
  }
}

double measure(const MeasurementSpec& spec, const Frame& frame, const Frame* reference) {
  const auto& a = spec.atoms;
  switch (spec.kind) {
    case MeasurementKind::kDistance: return distance(frame, (*a)[0], (*a)[1]);
    case MeasurementKind::kAngle: return angle(frame, (*a)[0], (*a)[1], (*a)[2]);
    case MeasurementKind::kDihedral: return dihedral(frame, (*a)[0], (*a)[1], (*a)[2], (*a)[3]);
    case MeasurementKind::kRmsd: {
      if (reference == nullptr) invalid("rmsd needs a reference frame");
      const Selection sel = a ? Selection(*a) : Selection::all(frame.atom_count());
      return rmsd(frame.coords, reference->coords, sel, spec.superpose);
    }
  }
  invalid("unknown measurement");
}

TimeTrace time_trace(const FrameSource& frames, const MeasurementSpec& spec, TraceOptions options) {
  const std::size_t n = frames.n_frames();
  spec.validate(frames.n_atoms(), n);
  std::optional<Frame> reference;
  if (spec.kind == MeasurementKind::kRmsd) reference = frames.frame(spec.reference_frame);
  const Frame* ref = reference ? &*reference : nullptr;

  TimeTrace trace;
  trace.spec = spec;
  trace.values.resize(n);
  trace.times_ps.resize(n);
  trace.frame_numbers.resize(n);
  std::iota(trace.frame_numbers.begin(), trace.frame_numbers.end(), std::int64_t{0});

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Frame frame = frames.frame(i);
      trace.values[i] = measure(spec, frame, ref);
      trace.times_ps[i] = frame.time_ps;
    }
  };
  const std::size_t chunks = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(n, 1));
  if (chunks == 1) {
    run(0, n);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t c = 0; c < chunks; ++c) {
      jobs.push_back(std::async(std::launch::async, run, c * n / chunks, (c + 1) * n / chunks));
    }
    for (auto& job : jobs) job.get();
  }
  return trace;
}

TimeTrace time_trace(const FrameSource& frames, const Structure& structure, const MeasurementSpec& spec,
                     TraceOptions options) {
  if (structure.atom_count() != frames.n_atoms()) {
    fail(ErrorCode::kMatch, "trajectory has " + std::to_string(frames.n_atoms()) + " atoms but structure " +
                                structure.id + " has " + std::to_string(structure.atom_count()));
  }
  return time_trace(frames, spec, options);
}

TimeTrace sort_trace(const TimeTrace& trace, TraceOrder order) {
  std::vector<std::size_t> perm(trace.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const auto& v = trace.values;
  const auto& f = trace.frame_numbers;
  switch (order) {
    case TraceOrder::kByFrame:
      std::stable_sort(perm.begin(), perm.end(), [&](auto a, auto b) { return f[a] < f[b]; });
      break;
    case TraceOrder::kAscending:
      std::stable_sort(perm.begin(), perm.end(),
                       [&](auto a, auto b) { return v[a] < v[b] || (v[a] == v[b] && f[a] < f[b]); });
      break;
    case TraceOrder::kDescending:
      std::stable_sort(perm.begin(), perm.end(),
                       [&](auto a, auto b) { return v[a] > v[b] || (v[a] == v[b] && f[a] < f[b]); });
      break;
  }
  TimeTrace out;
  out.spec = trace.spec;
  out.order = order;
  out.values.reserve(perm.size());
  out.frame_numbers.reserve(perm.size());
  out.times_ps.reserve(perm.size());
  for (std::size_t p : perm) {
    out.values.push_back(v[p]);
    out.frame_numbers.push_back(f[p]);
    out.times_ps.push_back(trace.times_ps[p]);
  }
  return out;
}

TimeTrace filter_trace(const TimeTrace& trace, double min, double max) {
  if (!(min <= max)) invalid("filter range [" + std::to_string(min) + ", " + std::to_string(max) + "] is empty");
  TimeTrace out;
  out.spec = trace.spec;
  out.order = trace.order;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace.values[k] >= min && trace.values[k] <= max) {
      out.values.push_back(trace.values[k]);
      out.frame_numbers.push_back(trace.frame_numbers[k]);
      out.times_ps.push_back(trace.times_ps[k]);
    }
  }
  return out;
}

nlohmann::json to_json(const MeasurementSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  if (spec.atoms) {
    j["atoms"] = *spec.atoms;
  } else {
    j["atoms"] = "all";
  }
  if (spec.kind == MeasurementKind::kRmsd) {
    j["reference_frame"] = spec.reference_frame;
    j["superpose"] = spec.superpose;
  }
  return j;
}

nlohmann::json to_json(const TimeTrace& trace) {
  nlohmann::json j = to_json(trace.spec);
  j["unit"] = unit_of(trace.spec.kind);
  j["order"] = to_string(trace.order);
  j["frames"] = trace.frame_numbers;
  j["times_ps"] = trace.times_ps;
  j["values"] = trace.values;
  return j;
}

MeasurementSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) invalid("measurement spec must be a JSON object");
  const auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string()) invalid("measurement spec needs a string 'kind'");
  const std::string kind = *kind_it;

  MeasurementSpec spec;
  if (kind == "distance") {
    spec.kind = MeasurementKind::kDistance;
  } else if (kind == "angle") {
    spec.kind = MeasurementKind::kAngle;
  } else if (kind == "dihedral") {
    spec.kind = MeasurementKind::kDihedral;
  } else if (kind == "rmsd") {
    spec.kind = MeasurementKind::kRmsd;
  } else {
    invalid("unknown measurement kind '" + kind + "'");
  }

  const auto atoms_it = j.find("atoms");
  if (atoms_it == j.end() || (atoms_it->is_string() && *atoms_it == "all")) {
    if (spec.kind != MeasurementKind::kRmsd) invalid(kind + " needs an explicit 'atoms' list");
  } else if (atoms_it->is_array()) {
    std::vector<std::size_t> atoms;
    for (const auto& a : *atoms_it) {
      if (!a.is_number_integer() || a.get<std::int64_t>() < 0) invalid("'atoms' entries must be non-negative integers");
      atoms.push_back(a.get<std::size_t>());
    }
    spec.atoms = std::move(atoms);
  } else {
    invalid("'atoms' must be a list or \"all\"");
  }

  if (const auto it = j.find("reference_frame"); it != j.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) invalid("'reference_frame' must be a non-negative integer");
    spec.reference_frame = it->get<std::size_t>();
  }
  if (const auto it = j.find("superpose"); it != j.end()) {
    if (!it->is_boolean()) invalid("'superpose' must be a boolean");
    spec.superpose = it->get<bool>();
  }
  return spec;
}

}  // namespace mdstream::analysis
