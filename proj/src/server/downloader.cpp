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

#include "mdstream/server/downloader.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include <httplib.h>

#include "mdstream/core/error.hpp"

namespace mdstream::server {
namespace {

httplib::Client make_client(const Url& url, const HttpOptions& options) {
  if (url.scheme == "https") {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    fail(ErrorCode::kDownload, "https is not available in this build");
#endif
  }
  httplib::Client cli(url.origin());
  cli.set_follow_location(true);
  cli.set_connection_timeout(options.connect_timeout_s, 0);
  cli.set_read_timeout(options.read_timeout_s, 0);
  return cli;
}

[[noreturn]] void transport_error(const std::string& url, httplib::Error err) {
  fail(ErrorCode::kDownload, "GET " + url + " failed: " + httplib::to_string(err));
}

}  // namespace

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

bool is_http_url(const std::string& text) {
  return text.rfind("http://", 0) == 0 || text.rfind("https://", 0) == 0;
}

Url parse_url(const std::string& text) {
  Url url;
  const auto sep = text.find("://");
  if (sep == std::string::npos) fail(ErrorCode::kInvalidArgument, "not an absolute URL: " + text);
  url.scheme = text.substr(0, sep);
  if (url.scheme != "http" && url.scheme != "https") {
    fail(ErrorCode::kInvalidArgument, "unsupported URL scheme '" + url.scheme + "'");
  }
  const auto rest = text.substr(sep + 3);
  const auto slash = rest.find_first_of("/?");
  std::string authority = rest.substr(0, slash);
  url.target = slash == std::string::npos ? "/" : rest.substr(slash);
  if (url.target.front() == '?') url.target = "/" + url.target;
  if (const auto at = authority.rfind('@'); at != std::string::npos) authority = authority.substr(at + 1);
  url.port = url.scheme == "https" ? 443 : 80;
  if (const auto colon = authority.rfind(':'); colon != std::string::npos && authority.find(']') == std::string::npos) {
    const std::string p = authority.substr(colon + 1);
    int port = 0;
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), port);
    if (ec != std::errc{} || ptr != p.data() + p.size() || port <= 0 || port > 65535) {
      fail(ErrorCode::kInvalidArgument, "bad port in URL: " + text);
    }
    url.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) fail(ErrorCode::kInvalidArgument, "URL has no host: " + text);
  url.host = authority;
  return url;
}

HttpResponse http_get(const std::string& text, const HttpOptions& options) {
  const Url url = parse_url(text);
  auto cli = make_client(url, options);
  HttpResponse out;
  bool too_large = false;
  auto res = cli.Get(
      url.target, httplib::Headers{},
      [&](const httplib::Response& r) {
        out.status = r.status;
        out.content_type = r.get_header_value("Content-Type");
        return true;
      },
      [&](const char* data, std::size_t len) {
        if (out.body.size() + len > options.max_bytes) {
          too_large = true;
          return false;
        }
        out.body.append(data, len);
        return true;
      });
  if (too_large) fail(ErrorCode::kTooLarge, "GET " + text + ": body exceeds " + std::to_string(options.max_bytes) + " bytes");
  if (!res) transport_error(text, res.error());
  out.status = res->status;
  return out;
}

std::uint64_t download_to_file(const std::string& text, const std::filesystem::path& dest,
                               const HttpOptions& options) {
  const Url url = parse_url(text);
  auto cli = make_client(url, options);
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot create " + dest.string());

  std::uint64_t written = 0;
  int status = 0;
  bool too_large = false;
  bool write_failed = false;
  auto res = cli.Get(
      url.target, httplib::Headers{},
      [&](const httplib::Response& r) {
        status = r.status;
        if (status != 200) return false;
        const auto len = r.get_header_value("Content-Length");
        if (!len.empty() && std::stoull(len) > options.max_bytes) {
          too_large = true;
          return false;
        }
        return true;
      },
      [&](const char* data, std::size_t len) {
        if (written + len > options.max_bytes) {
          too_large = true;
          return false;
        }
        out.write(data, static_cast<std::streamsize>(len));
        if (!out) {
          write_failed = true;
          return false;
        }
        written += len;
        return true;
      });
  out.close();

  auto cleanup = [&] {
    std::error_code ec;
    std::filesystem::remove(dest, ec);
  };
  if (too_large) {
    cleanup();
    fail(ErrorCode::kTooLarge, "download exceeds the " + std::to_string(options.max_bytes) + " byte limit: " + text);
  }
  if (write_failed || !out) {
    cleanup();
    fail(ErrorCode::kIo, "write failed for " + dest.string());
  }
  if (status != 0 && status != 200) {
    cleanup();
    fail(ErrorCode::kDownload, "GET " + text + " returned HTTP " + std::to_string(status));
  }
  if (!res) {
    cleanup();
    transport_error(text, res.error());
  }
  return written;
}

}  // namespace mdstream::server
