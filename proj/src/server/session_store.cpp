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

#include "mdstream/server/session_store.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>

#include "mdstream/core/error.hpp"
#include "mdstream/server/ids.hpp"
#include "mdstream/server/registry.hpp"

namespace fs = std::filesystem;

namespace mdstream::server {
namespace {

bool fault_enabled(const char* point) {
  const char* v = std::getenv("MDSTREAM_FAULT");
  return v != nullptr && std::strcmp(v, point) == 0;
}

SessionMeta meta_from_json(const nlohmann::json& j) {
  SessionMeta m;
  m.id = j.at("id").get<std::string>();
  m.name = j.value("name", "");
  m.description = j.value("description", "");
  m.source = j.value("source", "");
  m.trajectory_ids = j.value("trajectory_ids", std::vector<std::string>{});
  m.created_ns = j.value("created_ns", std::int64_t{0});
  m.state_bytes = j.value("state_bytes", std::size_t{0});
  return m;
}

}  // namespace

nlohmann::json to_json(const SessionMeta& m) {
  return {
      {"id", m.id},
      {"name", m.name},
      {"description", m.description},
      {"source", m.source},
      {"trajectory_ids", m.trajectory_ids},
      {"created_at", iso8601_utc(m.created_ns)},
      {"created_ns", m.created_ns},
      {"state_bytes", m.state_bytes},
  };
}

SessionStore::SessionStore(fs::path dir, std::size_t max_state_bytes, TrajectoryCheck exists)
    : dir_(std::move(dir)), max_state_bytes_(max_state_bytes), exists_(std::move(exists)) {
  fs::create_directories(dir_);
}

void SessionStore::load() {
  std::unordered_map<std::string, SessionMeta> loaded;
  std::vector<fs::path> blobs;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto& p = entry.path();
    std::error_code ec;
    if (p.extension() == ".tmp") {
      fs::remove(p, ec);
    } else if (p.extension() == ".state") {
      blobs.push_back(p);
    } else if (p.extension() == ".json") {
      try {
        auto m = meta_from_json(nlohmann::json::parse(read_file(p)));
        if (fs::exists(dir_ / (m.id + ".state"))) {
          loaded[m.id] = std::move(m);
        } else {
          fs::remove(p, ec);
        }
      } catch (const std::exception&) {
        fs::remove(p, ec);
      }
    }
  }
  for (const auto& blob : blobs) {
    if (!loaded.count(blob.stem().string())) {
      std::error_code ec;
      fs::remove(blob, ec);
    }
  }
  std::lock_guard lock(mu_);
  for (const auto& [_, m] : loaded) last_ns_ = std::max(last_ns_, m.created_ns);
  sessions_ = std::move(loaded);
}

SessionMeta SessionStore::save(const std::string& name, const std::string& description, const std::string& source,
                               std::string state, const std::vector<std::string>& trajectory_ids) {
  if (state.size() > max_state_bytes_) {
    fail(ErrorCode::kTooLarge, "session state is " + std::to_string(state.size()) + " bytes, limit is " +
                                   std::to_string(max_state_bytes_));
  }
  for (const auto& t : trajectory_ids) {
    if (!exists_ || !exists_(t)) fail(ErrorCode::kUnprocessable, "session references unknown trajectory '" + t + "'");
  }

  SessionMeta m;
  m.id = random_id();
  m.name = name;
  m.description = description;
  m.source = source;
  m.trajectory_ids = trajectory_ids;
  {
    // Strictly increasing so that newest-first ordering is total.
    std::lock_guard lock(mu_);
    last_ns_ = std::max(now_ns(), last_ns_ + 1);
    m.created_ns = last_ns_;
  }
  m.state_bytes = state.size();

  const fs::path blob = dir_ / (m.id + ".state");
  write_file_atomic(blob, state);
  if (fault_enabled("session-after-blob")) ::_exit(70);
  try {
    write_file_atomic(dir_ / (m.id + ".json"), to_json(m).dump(2));
  } catch (...) {
    std::error_code ec;
    fs::remove(blob, ec);
    throw;
  }

  std::lock_guard lock(mu_);
  sessions_[m.id] = m;
  return m;
}

std::optional<StoredSession> SessionStore::get(const std::string& id) const {
  SessionMeta m;
  {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    m = it->second;
  }
  return StoredSession{m, read_file(dir_ / (id + ".state"))};
}

std::vector<SessionMeta> SessionStore::list() const {
  std::vector<SessionMeta> out;
  {
    std::lock_guard lock(mu_);
    for (const auto& [_, m] : sessions_) out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](const SessionMeta& a, const SessionMeta& b) {
    return a.created_ns != b.created_ns ? a.created_ns > b.created_ns : a.id > b.id;
  });
  return out;
}

}  // namespace mdstream::server
