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
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

namespace mdstream::server {

using Payload = std::shared_ptr<const std::string>;

struct CacheStats {
  std::size_t capacity_bytes = 0;
  std::size_t bytes = 0;
  std::size_t peak_bytes = 0;
  std::size_t entries = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
};

// Byte-bounded LRU of immutable payloads. Payloads larger than the whole
// capacity are never stored. Safe for concurrent use.
class FrameCache {
 public:
  explicit FrameCache(std::size_t capacity_bytes) : capacity_(capacity_bytes) {}

  static std::string key(const std::string& trajectory_id, std::uint64_t frame) {
    return trajectory_id + '#' + std::to_string(frame);
  }

  Payload get(const std::string& key);
  void put(const std::string& key, Payload payload);
  void erase_prefix(const std::string& prefix);

  CacheStats stats() const;
  std::size_t capacity_bytes() const { return capacity_; }
  // Called with the cache lock held after every insertion, so it sees each
  // post-eviction state. Must not call back into the cache.
  void set_observer(std::function<void(const CacheStats&)> observer);

 private:
  struct Entry {
    std::string key;
    Payload payload;
  };

  void evict_locked();
  CacheStats stats_locked() const;

  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> lru_;  // front is most recent
  std::unordered_map<std::string, std::list<Entry>::iterator> map_;
  std::size_t bytes_ = 0;
  std::size_t peak_ = 0;
  std::uint64_t hits_ = 0, misses_ = 0, evictions_ = 0;
  std::function<void(const CacheStats&)> observer_;
};

}  // namespace mdstream::server
