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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>

#include "mdstream/core/error.hpp"

namespace mdstream::detail {

template <typename T>
T byteswap(T v) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  if constexpr (sizeof(T) == 4) {
    return std::bit_cast<T>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
  } else {
    return std::bit_cast<T>(__builtin_bswap64(std::bit_cast<std::uint64_t>(v)));
  }
}

template <typename T>
T load(const std::byte* p, std::endian order) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return order == std::endian::native ? v : byteswap(v);
}

template <typename T>
void store(std::byte* p, T v, std::endian order) {
  if (order != std::endian::native) v = byteswap(v);
  std::memcpy(p, &v, sizeof(T));
}

// Bounds-checked sequential reader over a byte span.
class Cursor {
 public:
  Cursor(std::span<const std::byte> bytes, std::endian order, std::uint64_t base_offset = 0)
      : bytes_(bytes), order_(order), base_(base_offset) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    const T v = load<T>(bytes_.data() + pos_, order_);
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::byte> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  void skip(std::size_t n) { take(n); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::uint64_t file_offset() const { return base_ + pos_; }
  std::endian order() const { return order_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      fail(ErrorCode::kCorrupt, "truncated data at offset " + std::to_string(base_ + pos_));
    }
  }

  std::span<const std::byte> bytes_;
  std::endian order_;
  std::uint64_t base_;
  std::size_t pos_ = 0;
};

}  // namespace mdstream::detail
