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

#include "mdstream/core/error.hpp"

namespace mdstream {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kEmptyStructure: return "empty structure";
    case ErrorCode::kNotFound: return "not found";
    case ErrorCode::kOutOfRange: return "out of range";
    case ErrorCode::kCorrupt: return "corrupt data";
    case ErrorCode::kUnsupportedFormat: return "unsupported format";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDegenerateGeometry: return "degenerate geometry";
    case ErrorCode::kInsufficientPoints: return "insufficient points";
    case ErrorCode::kMatch: return "match error";
    case ErrorCode::kAmbiguous: return "ambiguous match";
    case ErrorCode::kDownload: return "download error";
    case ErrorCode::kProtocol: return "protocol error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kTooLarge: return "too large";
    case ErrorCode::kUnprocessable: return "unprocessable";
  }
  return "unknown error";
}

}  // namespace mdstream
