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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "mdstream/core/error.hpp"
#include "mdstream/remote/zenodo.hpp"
#include "mdstream/server/frame_cache.hpp"
#include "mdstream/server/registry.hpp"
#include "mdstream/server/session_store.hpp"

namespace mdstream::server {

struct ServerOptions {
  std::filesystem::path data_dir;
  std::size_t cache_bytes = std::size_t{512} << 20;
  std::size_t trace_cache_bytes = std::size_t{32} << 20;
  std::vector<std::string> cors_origins;  // "*" allows any origin
  std::uint64_t max_download_bytes = std::uint64_t{16} << 30;
  std::size_t max_state_bytes = std::size_t{16} << 20;
  unsigned worker_threads = 64;
  unsigned trace_threads = 1;
  std::ostream* log = nullptr;  // one line per request when set
  std::shared_ptr<remote::Transport> zenodo_transport;  // defaults to the network
  std::string zenodo_api{remote::kZenodoApi};
};

// HTTP status for a library error code.
int http_status(ErrorCode code);

// The streaming service: registry, sessions, frame cache and the routes.
class StreamServer {
 public:
  explicit StreamServer(ServerOptions options);
  ~StreamServer();
  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  // Port 0 picks an ephemeral port. Returns the bound port; throws kIo when
  // the port cannot be bound.
  int bind(const std::string& host, int port);
  // Serves until stop(); in-flight requests complete before it returns.
  void run();
  void stop();
  bool running() const;

  // Full-frame payload for (id, i), from the cache when present.
  Payload frame_payload(const std::string& id, std::size_t i, bool* cache_hit = nullptr);
  // Trace JSON for a request body {spec, order?, filter?} or a bare spec.
  std::string trace_json(const std::string& id, const nlohmann::json& request, bool* cache_hit = nullptr);

  Registry& registry();
  SessionStore& sessions();
  FrameCache& frame_cache();
  const ServerOptions& options() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mdstream::server
