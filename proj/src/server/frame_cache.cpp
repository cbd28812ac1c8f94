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

#include "mdstream/server/frame_cache.hpp"

namespace mdstream::server {

Payload FrameCache::get(const std::string& key) {
  std::lock_guard lock(mu_);
  const auto it = map_.find(key);
  if (it == map_.end()) {
    ++misses_;
    return nullptr;
  }
  ++hits_;
  lru_.splice(lru_.begin(), lru_, it->second);
  return it->second->payload;
}

void FrameCache::put(const std::string& key, Payload payload) {
  if (!payload) return;
  std::lock_guard lock(mu_);
  if (const auto it = map_.find(key); it != map_.end()) {
    bytes_ -= it->second->payload->size();
    lru_.erase(it->second);
    map_.erase(it);
  }
  if (payload->size() <= capacity_) {
    // Make room first so the total never exceeds capacity, even transiently.
    while (!lru_.empty() && bytes_ + payload->size() > capacity_) evict_locked();
    lru_.push_front({key, std::move(payload)});
    map_[key] = lru_.begin();
    bytes_ += lru_.front().payload->size();
    if (bytes_ > peak_) peak_ = bytes_;
  }
  if (observer_) observer_(stats_locked());
}

void FrameCache::erase_prefix(const std::string& prefix) {
  std::lock_guard lock(mu_);
  for (auto it = lru_.begin(); it != lru_.end();) {
    if (it->key.rfind(prefix, 0) == 0) {
      bytes_ -= it->payload->size();
      map_.erase(it->key);
      it = lru_.erase(it);
    } else {
      ++it;
    }
  }
}

void FrameCache::evict_locked() {
  Entry& victim = lru_.back();
  bytes_ -= victim.payload->size();
  map_.erase(victim.key);
  lru_.pop_back();
  ++evictions_;
}

CacheStats FrameCache::stats() const {
  std::lock_guard lock(mu_);
  return stats_locked();
}

CacheStats FrameCache::stats_locked() const {
  return {capacity_, bytes_, peak_, map_.size(), hits_, misses_, evictions_};
}

void FrameCache::set_observer(std::function<void(const CacheStats&)> observer) {
  std::lock_guard lock(mu_);
  observer_ = std::move(observer);
}

}  // namespace mdstream::server
