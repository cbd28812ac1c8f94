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
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace mdstream::server {

struct SessionMeta {
  std::string id;
  std::string name;
  std::string description;
  std::string source;
  std::vector<std::string> trajectory_ids;
  std::int64_t created_ns = 0;
  std::size_t state_bytes = 0;
};

nlohmann::json to_json(const SessionMeta& meta);

struct StoredSession {
  SessionMeta meta;
  std::string state;  // exactly the bytes that were saved
};

// Sessions under <dir>: <id>.state holds the blob, <id>.json the metadata.
// The blob is renamed into place before the metadata, and a session exists
// only once its metadata does, so a crash mid-save leaves nothing visible.
// Leftover temporaries and blobs without metadata are removed by load().
//
// Setting MDSTREAM_FAULT=session-after-blob in the environment makes save()
// terminate the process between the two renames.
class SessionStore {
 public:
  using TrajectoryCheck = std::function<bool(const std::string&)>;

  SessionStore(std::filesystem::path dir, std::size_t max_state_bytes, TrajectoryCheck exists);

  void load();

  // kTooLarge above max_state_bytes, kUnprocessable for an unknown
  // trajectory id. Durable on return.
  SessionMeta save(const std::string& name, const std::string& description, const std::string& source,
                   std::string state, const std::vector<std::string>& trajectory_ids);

  std::optional<StoredSession> get(const std::string& id) const;
  // Newest first.
  std::vector<SessionMeta> list() const;

  std::size_t max_state_bytes() const { return max_state_bytes_; }

 private:
  std::filesystem::path dir_;
  std::size_t max_state_bytes_;
  TrajectoryCheck exists_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, SessionMeta> sessions_;
  std::int64_t last_ns_ = 0;
};

}  // namespace mdstream::server
