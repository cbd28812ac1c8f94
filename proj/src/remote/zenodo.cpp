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

#include "mdstream/remote/zenodo.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "mdstream/core/error.hpp"
#include "mdstream/server/downloader.hpp"

namespace mdstream::remote {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

class HttpTransport final : public Transport {
 public:
  HttpReply get(const std::string& url) override {
    const auto r = server::http_get(url);
    return {r.status, r.body};
  }
};

RemoteFile file_from_json(const nlohmann::json& f) {
  RemoteFile out;
  out.name = f.at("key").get<std::string>();
  out.size = f.value("size", std::uint64_t{0});
  if (const auto links = f.find("links"); links != f.end() && links->is_object()) {
    out.download_url = links->value("self", "");
  }
  out.kind = classify(out.name);
  return out;
}

}  // namespace

std::string_view to_string(FileKind kind) {
  switch (kind) {
    case FileKind::kStructure: return "Structure";
    case FileKind::kTrajectory: return "Trajectory";
    case FileKind::kVolume: return "Volume";
    case FileKind::kCompressed: return "Compressed";
    case FileKind::kUnsupported: return "Unsupported";
  }
  return "Unsupported";
}

FileKind parse_kind(std::string_view name) {
  const std::string n = lower(name);
  for (auto k : {FileKind::kStructure, FileKind::kTrajectory, FileKind::kVolume, FileKind::kCompressed,
                 FileKind::kUnsupported}) {
    if (lower(to_string(k)) == n) return k;
  }
  fail(ErrorCode::kInvalidArgument, "unknown file type '" + std::string(name) + "'");
}

FileKind classify(std::string_view file_name) {
  static const std::array<std::pair<std::string_view, FileKind>, 12> table{{
      {".tar.gz", FileKind::kCompressed},
      {".zip", FileKind::kCompressed},
      {".gz", FileKind::kCompressed},
      {".pdb", FileKind::kStructure},
      {".cif", FileKind::kStructure},
      {".gro", FileKind::kStructure},
      {".xtc", FileKind::kTrajectory},
      {".dcd", FileKind::kTrajectory},
      {".trr", FileKind::kTrajectory},
      {".mrc", FileKind::kVolume},
      {".ccp4", FileKind::kVolume},
      {".dx", FileKind::kVolume},
  }};
  const std::string n = lower(file_name);
  for (const auto& [ext, kind] : table) {
    if (ends_with(n, ext) && n.size() > ext.size()) return kind;
  }
  return FileKind::kUnsupported;
}

nlohmann::json to_json(const RemoteFile& f) {
  return {{"name", f.name}, {"download_url", f.download_url}, {"size", f.size}, {"kind", std::string(to_string(f.kind))}};
}

nlohmann::json to_json(const RecordListing& l) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : l.files) files.push_back(to_json(f));
  nlohmann::json j = {{"record", l.record}, {"files", files}};
  if (!l.notice.empty()) j["notice"] = l.notice;
  return j;
}

std::shared_ptr<Transport> http_transport() { return std::make_shared<HttpTransport>(); }

RecordListing parse_record(std::int64_t record, std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::kProtocol, "record " + std::to_string(record) + ": response is not JSON");
  }
  if (!doc.is_object()) fail(ErrorCode::kProtocol, "record " + std::to_string(record) + ": response is not an object");

  RecordListing out;
  out.record = record;
  const auto files = doc.find("files");
  try {
    if (files != doc.end() && files->is_array()) {
      for (const auto& f : *files) out.files.push_back(file_from_json(f));
    } else if (files != doc.end() && files->is_object() && files->contains("entries")) {
      const auto& entries = (*files)["entries"];
      if (entries.is_array()) {
        for (const auto& f : entries) out.files.push_back(file_from_json(f));
      } else {
        for (const auto& [_, f] : entries.items()) out.files.push_back(file_from_json(f));
      }
    } else if (files != doc.end()) {
      fail(ErrorCode::kProtocol, "record " + std::to_string(record) + ": 'files' has an unexpected shape");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kProtocol, "record " + std::to_string(record) + ": malformed file entry: " + e.what());
  }
  const bool any = std::any_of(out.files.begin(), out.files.end(),
                               [](const RemoteFile& f) { return f.kind != FileKind::kUnsupported; });
  if (!any) out.notice = "record " + std::to_string(record) + " contains no supported files";
  return out;
}

RecordListing fetch_record(Transport& transport, std::int64_t record, std::string_view api_base) {
  if (record <= 0) fail(ErrorCode::kInvalidArgument, "record number must be a positive integer");
  const std::string url = std::string(api_base) + std::to_string(record);
  const HttpReply reply = transport.get(url);
  if (reply.status == 404) fail(ErrorCode::kNotFound, "record " + std::to_string(record) + " not found");
  if (reply.status < 200 || reply.status >= 300) {
    fail(ErrorCode::kDownload, "GET " + url + " returned HTTP " + std::to_string(reply.status));
  }
  return parse_record(record, reply.body);
}

std::vector<RemoteFile> filter_by_type(const std::vector<RemoteFile>& files, FileKind kind) {
  std::vector<RemoteFile> out;
  std::copy_if(files.begin(), files.end(), std::back_inserter(out), [kind](const RemoteFile& f) { return f.kind == kind; });
  return out;
}

}  // namespace mdstream::remote
