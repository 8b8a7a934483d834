// Copyright 2026 The eegpi Authors.
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

#ifndef EEGPI_EPOCH_QUEUE_H_
#define EEGPI_EPOCH_QUEUE_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>

namespace eegpi::pipeline {

struct QueueCounters {
  std::uint64_t produced = 0;
  std::uint64_t consumed = 0;
  std::uint64_t dropped = 0;
  std::uint64_t queued = 0;
};

// Bounded FIFO shared by one producer and one consumer. A push into a full
// queue drops the new item and counts it; the producer never blocks.
// produced == consumed + dropped + queued holds after every operation.
template <typename T>
class DropNewestQueue {
 public:
  explicit DropNewestQueue(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("queue capacity must be >= 1");
  }

  DropNewestQueue(const DropNewestQueue&) = delete;
  DropNewestQueue& operator=(const DropNewestQueue&) = delete;

  // Returns false if the item was dropped (full or closed).
  bool TryPush(T item) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++produced_;
      if (closed_ || items_.size() >= capacity_) {
        ++dropped_;
        return false;
      }
      items_.push_back(std::move(item));
    }
    not_empty_.notify_one();
    return true;
  }

  std::optional<T> TryPop() {
    std::lock_guard<std::mutex> lock(mu_);
    return PopLocked();
  }

  // Blocks until an item arrives or the queue is closed and drained.
  std::optional<T> WaitPop() {
    std::unique_lock<std::mutex> lock(mu_);
    not_empty_.wait(lock, [this] { return !items_.empty() || closed_; });
    return PopLocked();
  }

  void Close() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      closed_ = true;
    }
    not_empty_.notify_all();
  }

  QueueCounters counters() const {
    std::lock_guard<std::mutex> lock(mu_);
    return {produced_, consumed_, dropped_, items_.size()};
  }

  std::size_t capacity() const { return capacity_; }

 private:
  std::optional<T> PopLocked() {
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    ++consumed_;
    return item;
  }

  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable not_empty_;
  std::deque<T> items_;
  bool closed_ = false;
  std::uint64_t produced_ = 0;
  std::uint64_t consumed_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace eegpi::pipeline

#endif  // EEGPI_EPOCH_QUEUE_H_
