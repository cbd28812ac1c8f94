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

#include "mdstream/server/http_server.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "mdstream/analysis/time_trace.hpp"
#include "mdstream/server/ids.hpp"
#include "mdstream/server/wire.hpp"

namespace mdstream::server {
namespace {

using nlohmann::json;

thread_local std::chrono::steady_clock::time_point request_start;

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, {{"error", httplib::status_message(status)}, {"message", message}}, status);
}

std::size_t parse_index(const std::string& text, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(ErrorCode::kInvalidArgument, std::string(what) + " '" + text + "' is not a non-negative integer");
  }
  return v;
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception&) {
    fail(ErrorCode::kInvalidArgument, "request body is not valid JSON");
  }
}

std::string string_field(const json& j, const char* key, bool required) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) fail(ErrorCode::kInvalidArgument, std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) fail(ErrorCode::kInvalidArgument, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

// Wraps a route so library errors become JSON error responses.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kTooLarge:
      return 413;
    case ErrorCode::kOutOfRange:
      return 416;
    case ErrorCode::kUnprocessable:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kMatch:
    case ErrorCode::kAmbiguous:
    case ErrorCode::kDegenerateGeometry:
    case ErrorCode::kInsufficientPoints:
    case ErrorCode::kEmptyStructure:
      return 422;
    case ErrorCode::kDownload:
    case ErrorCode::kProtocol:
      return 502;
    case ErrorCode::kCorrupt:
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

struct StreamServer::Impl {
  explicit Impl(ServerOptions o)
      : options(std::move(o)),
        registry(options.data_dir, RegistryOptions{options.max_download_bytes}),
        sessions(options.data_dir / "sessions", options.max_state_bytes,
                 [this](const std::string& id) { return registry.contains(id); }),
        cache(options.cache_bytes),
        traces(options.trace_cache_bytes) {}

  void log_line(const httplib::Request& req, const httplib::Response& res) {
    if (options.log == nullptr) return;
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - request_start).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, " %d %zu %.3fms", res.status, res.body.size(), ms);
    std::lock_guard lock(log_mu);
    *options.log << req.method << ' ' << req.path << buf << '\n' << std::flush;
  }

  void apply_cors(const httplib::Request& req, httplib::Response& res) const {
    const std::string origin = req.get_header_value("Origin");
    if (origin.empty()) return;
    const bool any = std::find(options.cors_origins.begin(), options.cors_origins.end(), "*") != options.cors_origins.end();
    const bool listed =
        std::find(options.cors_origins.begin(), options.cors_origins.end(), origin) != options.cors_origins.end();
    if (!any && !listed) return;
    res.set_header("Access-Control-Allow-Origin", any ? "*" : origin);
    if (!any) res.set_header("Vary", "Origin");
    res.set_header("Access-Control-Expose-Headers", "X-MDS-Wire, X-MDS-Cache");
  }

  void routes();

  ServerOptions options;
  Registry registry;
  SessionStore sessions;
  FrameCache cache;
  FrameCache traces;
  httplib::Server http;
  std::mutex log_mu;
  std::atomic<bool> bound{false};
  std::atomic<bool> in_run{false};
  std::atomic<bool> stop_requested{false};
  StreamServer* owner = nullptr;
};

StreamServer::StreamServer(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->owner = this;
  for (const auto& msg : impl_->registry.load()) {
    if (impl_->options.log) *impl_->options.log << "skipped trajectory record " << msg << '\n';
  }
  impl_->sessions.load();
  if (!impl_->options.zenodo_transport) impl_->options.zenodo_transport = remote::http_transport();
  impl_->routes();
}

StreamServer::~StreamServer() { stop(); }

int StreamServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->http.bind_to_any_port(host) : (impl_->http.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) fail(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port) + " (port in use?)");
  impl_->bound = true;
  return bound;
}

void StreamServer::run() {
  if (!impl_->bound) fail(ErrorCode::kIo, "run() before bind()");
  impl_->in_run = true;
  if (!impl_->stop_requested) impl_->http.listen_after_bind();
  impl_->in_run = false;
}

void StreamServer::stop() {
  impl_->stop_requested = true;
  // run() may be between its flag check and the listen loop starting.
  while (impl_->in_run && !impl_->http.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  if (impl_->in_run) impl_->http.stop();
}

bool StreamServer::running() const { return impl_->http.is_running(); }

Registry& StreamServer::registry() { return impl_->registry; }
SessionStore& StreamServer::sessions() { return impl_->sessions; }
FrameCache& StreamServer::frame_cache() { return impl_->cache; }
const ServerOptions& StreamServer::options() const { return impl_->options; }

Payload StreamServer::frame_payload(const std::string& id, std::size_t i, bool* cache_hit) {
  const auto rec = impl_->registry.get(id);
  const std::size_t n = rec->meta().n_frames;
  if (i >= n) fail(ErrorCode::kOutOfRange, "frame " + std::to_string(i) + " of " + std::to_string(n));
  const std::string key = FrameCache::key(id, i);
  if (auto hit = impl_->cache.get(key)) {
    if (cache_hit) *cache_hit = true;
    return hit;
  }
  if (cache_hit) *cache_hit = false;
  auto payload = std::make_shared<const std::string>(encode_frame(rec->trajectory->read_frame(i)));
  impl_->cache.put(key, payload);
  return payload;
}

std::string StreamServer::trace_json(const std::string& id, const json& request, bool* cache_hit) {
  const auto rec = impl_->registry.get(id);
  if (!request.is_object()) fail(ErrorCode::kInvalidArgument, "trace request must be a JSON object");
  const json& spec_json = request.contains("spec") ? request["spec"] : request;
  const auto spec = analysis::spec_from_json(spec_json);
  spec.validate(rec->meta().n_atoms, rec->meta().n_frames);

  auto order = analysis::TraceOrder::kByFrame;
  if (const auto it = request.find("order"); it != request.end()) {
    if (!it->is_string()) fail(ErrorCode::kInvalidArgument, "'order' must be a string");
    order = analysis::parse_order(it->get<std::string>());
  }
  std::optional<std::pair<double, double>> filter;
  if (const auto it = request.find("filter"); it != request.end() && !it->is_null()) {
    if (!it->is_object() || !it->contains("min") || !it->contains("max") || !(*it)["min"].is_number() ||
        !(*it)["max"].is_number()) {
      fail(ErrorCode::kInvalidArgument, "'filter' must be {\"min\": number, \"max\": number}");
    }
    filter.emplace((*it)["min"].get<double>(), (*it)["max"].get<double>());
    if (filter->first > filter->second) fail(ErrorCode::kInvalidArgument, "filter min exceeds max");
  }

  json canonical = {{"spec", analysis::to_json(spec)}, {"order", std::string(analysis::to_string(order))}};
  if (filter) canonical["filter"] = {{"min", filter->first}, {"max", filter->second}};
  const std::string key = id + '|' + canonical.dump();
  if (auto hit = impl_->traces.get(key)) {
    if (cache_hit) *cache_hit = true;
    return *hit;
  }
  if (cache_hit) *cache_hit = false;

  analysis::TimeTrace trace = analysis::time_trace(*rec->trajectory, spec, {impl_->options.trace_threads});
  if (filter) trace = analysis::filter_trace(trace, filter->first, filter->second);
  if (order != analysis::TraceOrder::kByFrame) trace = analysis::sort_trace(trace, order);
  auto body = std::make_shared<const std::string>(analysis::to_json(trace).dump());
  impl_->traces.put(key, body);
  return *body;
}

void StreamServer::Impl::routes() {
  http.new_task_queue = [n = options.worker_threads] { return new httplib::ThreadPool(n); };
  // Plain SO_REUSEADDR: the default SO_REUSEPORT lets a second server share a busy port.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  http.set_payload_max_length(options.max_state_bytes + (std::size_t{1} << 20));
  http.set_pre_routing_handler([](const httplib::Request&, httplib::Response&) {
    request_start = std::chrono::steady_clock::now();
    return httplib::Server::HandlerResponse::Unhandled;
  });
  http.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) { apply_cors(req, res); });
  http.set_logger([this](const httplib::Request& req, const httplib::Response& res) { log_line(req, res); });
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, httplib::status_message(res.status));
  });

  http.Options(R"(/api/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    apply_cors(req, res);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  http.Get("/api/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, {{"status", "ok"}}); });

  http.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    const auto s = cache.stats();
    send_json(res, {{"cache", {{"capacity_bytes", s.capacity_bytes},
                               {"bytes", s.bytes},
                               {"peak_bytes", s.peak_bytes},
                               {"entries", s.entries},
                               {"hits", s.hits},
                               {"misses", s.misses},
                               {"evictions", s.evictions}}}});
  });

  http.Get("/api/trajectories", guarded([this](const httplib::Request&, httplib::Response& res) {
             json list = json::array();
             for (const auto& rec : registry.list()) list.push_back(to_json(*rec));
             send_json(res, {{"trajectories", list}});
           }));

  http.Post("/api/trajectories", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const json body = parse_body(req);
              if (!body.is_object()) fail(ErrorCode::kInvalidArgument, "request body must be a JSON object");
              std::string url = string_field(body, "url", false);
              if (url.empty()) url = string_field(body, "path", true);
              const auto rec = registry.register_trajectory(url, string_field(body, "name", false),
                                                            string_field(body, "description", false),
                                                            string_field(body, "source", false));
              send_json(res, to_json(*rec), 201);
            }));

  http.Get(R"(/api/traj/([^/]+)/meta)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             send_json(res, to_json(*registry.get(req.matches[1])));
           }));

  http.Get(R"(/api/traj/([^/]+)/frame/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1];
             const auto rec = registry.get(id);
             const std::size_t i = parse_index(req.matches[2], "frame index");
             const std::size_t n_atoms = rec->meta().n_atoms;

             std::optional<Selection> atoms;
             if (req.has_param("atoms")) atoms = parse_atom_list(req.get_param_value("atoms"), n_atoms);
             std::size_t stride = 1;
             if (req.has_param("stride")) {
               stride = parse_index(req.get_param_value("stride"), "stride");
               if (stride == 0) fail(ErrorCode::kInvalidArgument, "stride must be positive");
             }
             if (stride > 1) {
               const std::vector<std::size_t> base = atoms ? atoms->indices() : Selection::all(n_atoms).indices();
               std::vector<std::size_t> kept;
               for (std::size_t k = 0; k < base.size(); k += stride) kept.push_back(base[k]);
               atoms = Selection(std::move(kept));
             }

             bool hit = false;
             Payload full;
             try {
               full = owner->frame_payload(id, i, &hit);
             } catch (const Error& e) {
               if (e.code() == ErrorCode::kOutOfRange) {
                 res.set_header("Content-Range", "frames */" + std::to_string(rec->meta().n_frames));
               }
               throw;
             }
             res.set_header("X-MDS-Wire", std::to_string(kWireVersion));
             res.set_header("X-MDS-Cache", hit ? "hit" : "miss");
             res.set_header("X-MDS-Frame", std::to_string(i));
             res.set_content(atoms ? subset_payload(*full, *atoms) : *full, "application/octet-stream");
           }));

  http.Post(R"(/api/traj/([^/]+)/trace)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              bool hit = false;
              const std::string body = owner->trace_json(req.matches[1], parse_body(req), &hit);
              res.set_header("X-MDS-Cache", hit ? "hit" : "miss");
              res.set_content(body, "application/json");
            }));

  http.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const json body = parse_body(req);
              if (!body.is_object()) fail(ErrorCode::kInvalidArgument, "request body must be a JSON object");
              if (!body.contains("state")) fail(ErrorCode::kInvalidArgument, "missing field 'state'");
              std::vector<std::string> ids;
              if (const auto it = body.find("trajectory_ids"); it != body.end() && !it->is_null()) {
                if (!it->is_array()) fail(ErrorCode::kInvalidArgument, "'trajectory_ids' must be a list");
                for (const auto& t : *it) {
                  if (!t.is_string()) fail(ErrorCode::kInvalidArgument, "'trajectory_ids' entries must be strings");
                  ids.push_back(t.get<std::string>());
                }
              }
              const auto meta = sessions.save(string_field(body, "name", true), string_field(body, "description", false),
                                              string_field(body, "source", false), body["state"].dump(), ids);
              send_json(res, to_json(meta), 201);
            }));

  http.Get("/api/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
             json list = json::array();
             for (const auto& m : sessions.list()) list.push_back(to_json(m));
             send_json(res, {{"sessions", list}});
           }));

  http.Get(R"(/api/session/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1];
             const auto s = is_valid_id(id) ? sessions.get(id) : std::nullopt;
             if (!s) fail(ErrorCode::kNotFound, "unknown session '" + id + "'");
             // The stored bytes are embedded verbatim.
             res.set_content("{\"session\":" + to_json(s->meta).dump() + ",\"state\":" + s->state + "}",
                             "application/json");
           }));

  http.Get(R"(/api/session/([^/]+)/state)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1];
             const auto s = is_valid_id(id) ? sessions.get(id) : std::nullopt;
             if (!s) fail(ErrorCode::kNotFound, "unknown session '" + id + "'");
             res.set_content(s->state, "application/json");
           }));

  http.Get(R"(/api/zenodo/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string n = req.matches[1];
             std::int64_t record = 0;
             const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), record);
             if (ec != std::errc{} || ptr != n.data() + n.size()) {
               fail(ErrorCode::kInvalidArgument, "record number '" + n + "' is not an integer");
             }
             auto listing = remote::fetch_record(*options.zenodo_transport, record, options.zenodo_api);
             if (req.has_param("type")) {
               listing.files = remote::filter_by_type(listing.files, remote::parse_kind(req.get_param_value("type")));
             }
             send_json(res, remote::to_json(listing));
           }));
}

}  // namespace mdstream::server
