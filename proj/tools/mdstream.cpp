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

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mdstream/analysis/time_trace.hpp"
#include "mdstream/core/error.hpp"
#include "mdstream/core/pdb.hpp"
#include "mdstream/remote/zenodo.hpp"
#include "mdstream/server/http_server.hpp"
#include "mdstream/server/registry.hpp"
#include "mdstream/server/wire.hpp"
#include "mdstream/traj/trajectory.hpp"

using namespace mdstream;

namespace {

struct ServeArgs {
  int port = 8091;
  std::string host = "0.0.0.0";
  std::string data_dir;
  double cache_mb = 512;
  std::vector<std::string> cors;
  double max_download_gb = 16;
  double max_session_mb = 16;
  unsigned threads = 64;
  bool quiet = false;
};

int serve(const ServeArgs& a) {
  // Block the shutdown signals before any thread exists so only the waiter
  // below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGINT);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  server::ServerOptions opt;
  opt.data_dir = a.data_dir;
  opt.cache_bytes = static_cast<std::size_t>(a.cache_mb * 1024 * 1024);
  opt.cors_origins = a.cors;
  opt.max_download_bytes = static_cast<std::uint64_t>(a.max_download_gb * 1024 * 1024 * 1024);
  opt.max_state_bytes = static_cast<std::size_t>(a.max_session_mb * 1024 * 1024);
  opt.worker_threads = a.threads;
  opt.log = a.quiet ? nullptr : &std::cerr;

  server::StreamServer srv(opt);
  const int port = srv.bind(a.host, a.port);
  std::cout << "listening on " << a.host << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "signal " << sig << ", draining" << std::endl;
    srv.stop();
  });
  srv.run();
  // Wake the waiter if run() ended for another reason.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

int index_file(const std::string& path) {
  const auto traj = Trajectory::open(path);
  const auto sidecar = index_sidecar_path(path);
  write_index_file(sidecar, traj.index());
  std::cout << "wrote " << sidecar.string() << " frames=" << traj.meta().n_frames << "\n";
  if (traj.truncated()) std::cerr << "warning: trailing partial frame ignored\n";
  return 0;
}

int info(const std::string& path) {
  const auto traj = Trajectory::open(path);
  const auto& m = traj.meta();
  std::cout << "format=" << to_string(m.format) << " atoms=" << m.n_atoms << " frames=" << m.n_frames << "\n";
  if (traj.truncated()) std::cerr << "warning: trailing partial frame ignored\n";
  return 0;
}

struct TraceArgs {
  std::string structure;
  std::string trajectory;
  std::vector<std::size_t> distance, angle, dihedral;
  std::string rmsd;
  std::size_t ref = 0;
  bool no_superpose = false;
  std::string order = "frame";
  std::optional<double> min, max;
  unsigned threads = 1;
};

analysis::MeasurementSpec trace_spec(const TraceArgs& a) {
  const int given = !a.distance.empty() + !a.angle.empty() + !a.dihedral.empty() + !a.rmsd.empty();
  if (given != 1) fail(ErrorCode::kInvalidArgument, "give exactly one of --distance, --angle, --dihedral, --rmsd");
  if (!a.distance.empty()) return analysis::MeasurementSpec::distance(a.distance.at(0), a.distance.at(1));
  if (!a.angle.empty()) return analysis::MeasurementSpec::angle(a.angle.at(0), a.angle.at(1), a.angle.at(2));
  if (!a.dihedral.empty()) {
    return analysis::MeasurementSpec::dihedral(a.dihedral.at(0), a.dihedral.at(1), a.dihedral.at(2), a.dihedral.at(3));
  }
  std::optional<std::vector<std::size_t>> atoms;
  if (a.rmsd != "all") atoms = server::parse_atom_list(a.rmsd, std::numeric_limits<std::size_t>::max()).indices();
  return analysis::MeasurementSpec::rmsd(atoms, a.ref, !a.no_superpose);
}

int trace(const TraceArgs& a) {
  const auto spec = trace_spec(a);
  const Structure structure = parse_pdb(server::read_file(a.structure), a.structure);
  const auto traj = Trajectory::open(a.trajectory);
  auto t = analysis::time_trace(traj, structure, spec, {a.threads});
  if (a.min || a.max) {
    t = analysis::filter_trace(t, a.min.value_or(-std::numeric_limits<double>::infinity()),
                               a.max.value_or(std::numeric_limits<double>::infinity()));
  }
  t = analysis::sort_trace(t, analysis::parse_order(a.order));
  const std::string unit(analysis::unit_of(spec.kind));
  std::printf("frame,time_ps,value,unit\n");
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::printf("%lld,%.17g,%.17g,%s\n", static_cast<long long>(t.frame_numbers[k]), t.times_ps[k], t.values[k],
                unit.c_str());
  }
  return 0;
}

int zenodo(std::int64_t record, const std::string& type, const std::string& api) {
  auto transport = remote::http_transport();
  auto listing = remote::fetch_record(*transport, record, api);
  if (!type.empty()) listing.files = remote::filter_by_type(listing.files, remote::parse_kind(type));
  for (const auto& f : listing.files) {
    std::cout << remote::to_string(f.kind) << '\t' << f.size << '\t' << f.name << '\t' << f.download_url << '\n';
  }
  if (!listing.has_supported()) std::cout << "notice: " << listing.notice << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mdstream: MD trajectory streaming server and tools"};
  app.require_subcommand(1);

  ServeArgs sa;
  auto* s = app.add_subcommand("serve", "run the streaming server");
  s->add_option("--port", sa.port, "TCP port, 0 for an ephemeral one")->capture_default_str();
  s->add_option("--host", sa.host, "listen address")->capture_default_str();
  s->add_option("--data-dir", sa.data_dir, "directory for trajectories and sessions")->required();
  s->add_option("--cache-mb", sa.cache_mb, "frame cache capacity in MiB")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--cors-origin", sa.cors, "allowed browser origin, repeatable; * for any");
  s->add_option("--max-download-gb", sa.max_download_gb, "download size limit in GiB")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s->add_option("--max-session-mb", sa.max_session_mb, "session state size limit in MiB")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s->add_option("--threads", sa.threads, "request worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_flag("--quiet", sa.quiet, "no request log");

  std::string path;
  auto* ix = app.add_subcommand("index", "write the .mdix frame index next to a trajectory");
  ix->add_option("file", path)->required()->check(CLI::ExistingFile);
  auto* in = app.add_subcommand("info", "print trajectory metadata");
  in->add_option("file", path)->required()->check(CLI::ExistingFile);

  TraceArgs ta;
  auto* tr = app.add_subcommand("trace", "print a time trace as CSV (frame,time_ps,value,unit)");
  tr->add_option("structure", ta.structure, "PDB file")->required()->check(CLI::ExistingFile);
  tr->add_option("trajectory", ta.trajectory, "XTC or DCD file")->required()->check(CLI::ExistingFile);
  tr->add_option("--distance", ta.distance, "atom indices i j")->expected(2);
  tr->add_option("--angle", ta.angle, "atom indices i j k")->expected(3);
  tr->add_option("--dihedral", ta.dihedral, "atom indices i j k l")->expected(4);
  tr->add_option("--rmsd", ta.rmsd, "'all' or comma-separated atom indices");
  tr->add_option("--ref", ta.ref, "RMSD reference frame")->capture_default_str();
  tr->add_flag("--no-superpose", ta.no_superpose, "RMSD without fitting");
  tr->add_option("--order", ta.order, "frame, ascending or descending")->capture_default_str();
  tr->add_option("--min", ta.min, "keep values >= min");
  tr->add_option("--max", ta.max, "keep values <= max");
  tr->add_option("--threads", ta.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  std::int64_t record = 0;
  std::string type, api{remote::kZenodoApi};
  auto* zn = app.add_subcommand("zenodo", "list the files of a Zenodo record");
  zn->add_option("record", record)->required();
  zn->add_option("--type", type, "structure, trajectory, volume, compressed or unsupported");
  zn->add_option("--api", api, "records endpoint prefix")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*s) return serve(sa);
    if (*ix) return index_file(path);
    if (*in) return info(path);
    if (*tr) return trace(ta);
    if (*zn) return zenodo(record, type, api);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
