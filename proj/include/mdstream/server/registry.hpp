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
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mdstream/traj/trajectory.hpp"

namespace mdstream::server {

struct TrajectoryRecord {
  std::string id;
  std::string name;
  std::string description;
  std::string source;      // provenance text supplied at registration
  std::string origin;      // the URL or local path it was registered from
  std::filesystem::path storage_path;
  std::int64_t created_ns = 0;
  std::shared_ptr<const Trajectory> trajectory;

  const TrajectoryMeta& meta() const { return trajectory->meta(); }
};

nlohmann::json to_json(const TrajectoryRecord& record);

struct RegistryOptions {
  std::uint64_t max_download_bytes = std::uint64_t{16} << 30;
};

// Trajectory store under <data_dir>/trajectories: <id>.<ext> holds the data,
// <id>.<ext>.mdix its frame index and <id>.json the metadata. Thread-safe.
class Registry {
 public:
  explicit Registry(std::filesystem::path data_dir, RegistryOptions options = {});

  // Re-reads every record on disk; records whose files are missing or whose
  // index no longer matches are skipped and reported in the returned list.
  std::vector<std::string> load();

  // `url_or_path` is an http(s) URL or a path inside the data directory.
  // Every call yields a fresh id. On failure nothing is left behind.
  std::shared_ptr<const TrajectoryRecord> register_trajectory(const std::string& url_or_path,
                                                              const std::string& name,
                                                              const std::string& description,
                                                              const std::string& source);

  std::shared_ptr<const TrajectoryRecord> find(const std::string& id) const;
  // Throws kNotFound.
  std::shared_ptr<const TrajectoryRecord> get(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id) != nullptr; }
  // Oldest first.
  std::vector<std::shared_ptr<const TrajectoryRecord>> list() const;

  const std::filesystem::path& data_dir() const { return data_dir_; }
  std::filesystem::path store_dir() const { return data_dir_ / "trajectories"; }

 private:
  std::filesystem::path resolve_local(const std::string& path) const;

  std::filesystem::path data_dir_;
  RegistryOptions options_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const TrajectoryRecord>> records_;
};

// Writes `bytes` to `path` via a temporary sibling, fsync and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace mdstream::server
