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

#include "mdstream/server/registry.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include "mdstream/core/error.hpp"
#include "mdstream/server/downloader.hpp"
#include "mdstream/server/ids.hpp"

namespace fs = std::filesystem;

namespace mdstream::server {
namespace {

void fsync_path(const fs::path& path, bool directory) {
  const int fd = ::open(path.c_str(), directory ? O_RDONLY | O_DIRECTORY : O_RDONLY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string extension_for(TrajectoryFormat format) { return format == TrajectoryFormat::kXtc ? ".xtc" : ".dcd"; }

// Extension of the last path segment of a URL or path, lowercased.
std::string name_extension(const std::string& text) {
  std::string path = text.substr(0, text.find_first_of("?#"));
  while (!path.empty() && path.back() == '/') path.pop_back();
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

void remove_quietly(const fs::path& p) {
  std::error_code ec;
  fs::remove(p, ec);
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      remove_quietly(tmp);
      fail(ErrorCode::kIo, "cannot write " + tmp.string());
    }
  }
  fsync_path(tmp, false);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    remove_quietly(tmp);
    fail(ErrorCode::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
  }
  fsync_path(path.parent_path(), true);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json to_json(const TrajectoryRecord& r) {
  const auto& m = r.meta();
  nlohmann::json j = {
      {"id", r.id},
      {"name", r.name},
      {"description", r.description},
      {"source", r.source},
      {"format", std::string(to_string(m.format))},
      {"n_atoms", m.n_atoms},
      {"n_frames", m.n_frames},
      {"timestep_ps", m.timestep_ps ? nlohmann::json(*m.timestep_ps) : nlohmann::json(nullptr)},
      {"file_size", m.file_size},
      {"created_at", iso8601_utc(r.created_ns)},
  };
  return j;
}

Registry::Registry(fs::path data_dir, RegistryOptions options)
    : data_dir_(fs::absolute(std::move(data_dir)).lexically_normal()), options_(options) {
  fs::create_directories(store_dir());
}

std::vector<std::string> Registry::load() {
  std::vector<std::string> skipped;
  std::unordered_map<std::string, std::shared_ptr<const TrajectoryRecord>> loaded;
  for (const auto& entry : fs::directory_iterator(store_dir())) {
    const auto& p = entry.path();
    if (p.extension() == ".tmp") {
      remove_quietly(p);
      continue;
    }
    if (p.extension() != ".json") continue;
    try {
      const auto j = nlohmann::json::parse(read_file(p));
      auto rec = std::make_shared<TrajectoryRecord>();
      rec->id = j.at("id").get<std::string>();
      rec->name = j.value("name", "");
      rec->description = j.value("description", "");
      rec->source = j.value("source", "");
      rec->origin = j.value("origin", "");
      rec->created_ns = j.value("created_ns", std::int64_t{0});
      rec->storage_path = store_dir() / j.at("file").get<std::string>();
      const auto format = parse_format(j.at("format").get<std::string>());
      auto traj = Trajectory::open_indexed(rec->storage_path, format, read_index_file(index_sidecar_path(rec->storage_path)));
      if (traj.meta().n_atoms != j.at("n_atoms").get<std::size_t>()) {
        fail(ErrorCode::kCorrupt, "atom count changed since registration");
      }
      rec->trajectory = std::make_shared<const Trajectory>(std::move(traj));
      loaded[rec->id] = std::move(rec);
    } catch (const std::exception& e) {
      skipped.push_back(p.filename().string() + ": " + e.what());
    }
  }
  // Files left by a registration that never wrote its metadata.
  for (const auto& entry : fs::directory_iterator(store_dir())) {
    const std::string fname = entry.path().filename().string();
    const std::string id = fname.substr(0, fname.find('.'));
    if (!loaded.count(id) && !fs::exists(store_dir() / (id + ".json"))) remove_quietly(entry.path());
  }
  std::unique_lock lock(mu_);
  records_ = std::move(loaded);
  return skipped;
}

fs::path Registry::resolve_local(const std::string& path) const {
  fs::path p(path);
  if (p.is_relative()) p = data_dir_ / p;
  std::error_code ec;
  const fs::path canon = fs::canonical(p, ec);
  if (ec) fail(ErrorCode::kNotFound, "no such file: " + path);
  const fs::path root = fs::canonical(data_dir_);
  const auto rel = canon.lexically_relative(root);
  if (rel.empty() || *rel.begin() == "..") {
    fail(ErrorCode::kInvalidArgument, "local path must lie inside the data directory: " + path);
  }
  if (!fs::is_regular_file(canon)) fail(ErrorCode::kInvalidArgument, "not a regular file: " + path);
  return canon;
}

std::shared_ptr<const TrajectoryRecord> Registry::register_trajectory(const std::string& url_or_path,
                                                                      const std::string& name,
                                                                      const std::string& description,
                                                                      const std::string& source) {
  if (url_or_path.empty()) fail(ErrorCode::kInvalidArgument, "missing trajectory url");
  const std::string id = random_id();
  const fs::path staging = store_dir() / (id + ".download");
  fs::path storage;
  std::vector<fs::path> created{staging};

  try {
    if (is_http_url(url_or_path)) {
      HttpOptions http;
      http.max_bytes = options_.max_download_bytes;
      download_to_file(url_or_path, staging, http);
    } else {
      const fs::path local = resolve_local(url_or_path);
      std::error_code ec;
      fs::create_hard_link(local, staging, ec);
      if (ec) fs::copy_file(local, staging, fs::copy_options::overwrite_existing);
    }

    FileSource src(staging);
    const TrajectoryFormat format = detect_format(src, fs::path("x" + name_extension(url_or_path)));
    storage = store_dir() / (id + extension_for(format));
    fs::rename(staging, storage);
    created.push_back(storage);

    auto traj = Trajectory::open(storage);
    if (traj.meta().n_frames == 0) fail(ErrorCode::kCorrupt, "trajectory contains no complete frame");
    const fs::path sidecar = index_sidecar_path(storage);
    created.push_back(sidecar);
    write_index_file(sidecar, traj.index());

    auto rec = std::make_shared<TrajectoryRecord>();
    rec->id = id;
    rec->name = name;
    rec->description = description;
    rec->source = source;
    rec->origin = url_or_path;
    rec->storage_path = storage;
    rec->created_ns = now_ns();
    rec->trajectory = std::make_shared<const Trajectory>(std::move(traj));

    nlohmann::json j = to_json(*rec);
    j["file"] = storage.filename().string();
    j["origin"] = rec->origin;
    j["created_ns"] = rec->created_ns;
    const fs::path meta_path = store_dir() / (id + ".json");
    created.push_back(meta_path);
    write_file_atomic(meta_path, j.dump(2));

    std::unique_lock lock(mu_);
    records_[id] = rec;
    return rec;
  } catch (...) {
    for (const auto& p : created) remove_quietly(p);
    throw;
  }
}

std::shared_ptr<const TrajectoryRecord> Registry::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  const auto it = records_.find(id);
  return it == records_.end() ? nullptr : it->second;
}

std::shared_ptr<const TrajectoryRecord> Registry::get(const std::string& id) const {
  auto rec = find(id);
  if (!rec) fail(ErrorCode::kNotFound, "unknown trajectory '" + id + "'");
  return rec;
}

std::vector<std::shared_ptr<const TrajectoryRecord>> Registry::list() const {
  std::vector<std::shared_ptr<const TrajectoryRecord>> out;
  {
    std::shared_lock lock(mu_);
    for (const auto& [_, rec] : records_) out.push_back(rec);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a->created_ns != b->created_ns ? a->created_ns < b->created_ns : a->id < b->id;
  });
  return out;
}

}  // namespace mdstream::server
