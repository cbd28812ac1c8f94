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
#include <string>
#include <string_view>

namespace mdstream::server {

// Random token over [A-Za-z0-9_-] from the OS entropy source.
std::string random_id(std::size_t length = 22);
// True for 12..64 characters of the id alphabet; rejects anything that could
// escape a directory when used as a file name.
bool is_valid_id(std::string_view id);

// Wall clock helpers for record timestamps.
std::int64_t now_ns();
std::string iso8601_utc(std::int64_t ns);

}  // namespace mdstream::server
