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
#include <string>

namespace mdstream::server {

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string target;  // path plus query, at least "/"

  std::string origin() const;  // scheme://host:port
};

// Throws kInvalidArgument for anything but an absolute http(s) URL.
Url parse_url(const std::string& url);
bool is_http_url(const std::string& text);

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string content_type;
};

struct HttpOptions {
  std::uint64_t max_bytes = std::uint64_t{64} << 20;
  int connect_timeout_s = 30;
  int read_timeout_s = 300;
};

// GET with redirects followed. Transport failures throw kDownload; a body
// over max_bytes throws kTooLarge. Non-2xx statuses are returned, not thrown.
HttpResponse http_get(const std::string& url, const HttpOptions& options = {});

// Streams a 200 response body straight to `dest`. Any non-200 status, a body
// over max_bytes or a transport error throws (kDownload / kTooLarge) after
// removing whatever was written.
std::uint64_t download_to_file(const std::string& url, const std::filesystem::path& dest,
                               const HttpOptions& options = {});

}  // namespace mdstream::server
