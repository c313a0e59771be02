// Copyright 2026 The ghzlab Authors
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
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ghzlab {

/// Worker count: GHZLAB_THREADS wins over the requested value; 0 means one.
inline int resolve_threads(int requested = 1) {
  if (const char* env = std::getenv("GHZLAB_THREADS"); env != nullptr && *env != '\0') {
    try {
      requested = std::stoi(env);
    } catch (const std::exception&) {
    }
  }
  return std::max(1, requested);
}

/// Runs fn(worker, begin, end) over `workers` contiguous slices of [0, total).
/// Slices are fixed by (total, workers) alone, so any reduction over worker
/// results in worker order is deterministic.
template <typename Fn>
void parallel_ranges(std::uint64_t total, int workers, Fn&& fn) {
  workers = static_cast<int>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(total, workers)));
  if (workers <= 1) {
    fn(0, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const std::uint64_t chunk = total / static_cast<std::uint64_t>(workers);
  const std::uint64_t extra = total % static_cast<std::uint64_t>(workers);
  std::uint64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    std::uint64_t end = begin + chunk + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ghzlab
