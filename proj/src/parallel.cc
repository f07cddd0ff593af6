// Copyright 2026 The hikm Authors.
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

#include "hikm/parallel.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hikm {
namespace {

std::atomic<std::size_t>& thread_setting() {
  static std::atomic<std::size_t> n{
      std::max<std::size_t>(1, std::thread::hardware_concurrency())};
  return n;
}

}  // namespace

void set_num_threads(std::size_t n) { thread_setting() = std::max<std::size_t>(1, n); }

std::size_t num_threads() { return thread_setting(); }

void parallel_for_chunks(
    std::size_t count, std::size_t chunk,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  chunk = std::max<std::size_t>(1, chunk);
  const std::size_t chunks = num_chunks(count, chunk);
  const std::size_t workers = std::min(num_threads(), chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    fn(c, begin, std::min(count, begin + chunk));
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      try {
        run_chunk(c);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hikm
