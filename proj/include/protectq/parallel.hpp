// Copyright 2026 The protectq Authors
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

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "protectq/matrix.hpp"

namespace protectq {

// Runs fn(i) for i in [0, count). Work items are claimed through an atomic
// counter and every result must be written by index, so output is identical
// for any worker count. If items throw, the exception of the lowest index is
// rethrown after all workers drain.
inline void parallelFor(int threads, Index count,
                        const std::function<void(Index)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<Index> next{0};
  std::mutex errMutex;
  Index errIndex = count;
  std::exception_ptr error;
  auto worker = [&]() {
    for (;;) {
      const Index i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(errMutex);
        if (i < errIndex) {
          errIndex = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(std::min<Index>(threads, count));
  pool.reserve(static_cast<size_t>(spawn));
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Default worker count: --threads flag, else PROTECTQ_THREADS, else the
// hardware concurrency (resolved by the caller).
inline int hardwareThreads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace protectq
