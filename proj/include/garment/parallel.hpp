// Copyright 2026 The garment3d Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace garment {

/// Runs body(row) for row in [begin, end) on up to hardware_concurrency
/// threads, in contiguous blocks. Rows must be independent; the first
/// exception thrown is rethrown on the calling thread.
template <typename Body>
void parallel_rows(int begin, int end, Body&& body) {
  const int rows = end - begin;
  if (rows <= 0) return;
  const int workers =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(1, rows / 16));
  if (workers == 1) {
    for (int r = begin; r < end; ++r) body(r);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const int lo = begin + rows * w / workers;
      const int hi = begin + rows * (w + 1) / workers;
      pool.emplace_back([&, lo, hi] {
        try {
          for (int r = lo; r < hi; ++r) body(r);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace garment
