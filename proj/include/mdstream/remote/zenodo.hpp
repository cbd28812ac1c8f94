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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mdstream::remote {

enum class FileKind { kStructure, kTrajectory, kVolume, kCompressed, kUnsupported };

std::string_view to_string(FileKind kind);
// Case-insensitive "structure", "trajectory", ...; throws kInvalidArgument.
FileKind parse_kind(std::string_view name);

// Structure .pdb .cif .gro; Trajectory .xtc .dcd .trr; Volume .mrc .ccp4 .dx;
// Compressed .zip .gz .tar.gz (so x.xtc.gz is Compressed); anything else
// Unsupported. Extensions compare case-insensitively.
FileKind classify(std::string_view file_name);

struct RemoteFile {
  std::string name;
  std::string download_url;
  std::uint64_t size = 0;
  FileKind kind = FileKind::kUnsupported;

  friend bool operator==(const RemoteFile&, const RemoteFile&) = default;
};

nlohmann::json to_json(const RemoteFile& file);

struct HttpReply {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpReply get(const std::string& url) = 0;
};

// Real network access through the HTTP client.
std::shared_ptr<Transport> http_transport();

inline constexpr std::string_view kZenodoApi = "https://zenodo.org/api/records/";

struct RecordListing {
  std::int64_t record = 0;
  std::vector<RemoteFile> files;
  // Set when no file has a supported kind.
  std::string notice;

  bool has_supported() const { return notice.empty(); }
};

nlohmann::json to_json(const RecordListing& listing);

// One GET of <api_base><record>; file bodies are never fetched. Throws
// kInvalidArgument for record <= 0, kNotFound on 404, kDownload for other
// non-2xx statuses and kProtocol when the body is not a record document.
RecordListing fetch_record(Transport& transport, std::int64_t record, std::string_view api_base = kZenodoApi);

// Parses a record document; exposed for replaying recorded fixtures.
RecordListing parse_record(std::int64_t record, std::string_view body);

std::vector<RemoteFile> filter_by_type(const std::vector<RemoteFile>& files, FileKind kind);

}  // namespace mdstream::remote
