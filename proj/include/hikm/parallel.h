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

#ifndef HIKM_PARALLEL_H_
#define HIKM_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace hikm {

// Worker count used by every parallel loop in the library. Defaults to the
// hardware concurrency. Results never depend on this value: work is split
// into fixed-size chunks whose boundaries depend only on the problem size,
// and any reduction over chunks happens in chunk order.
void set_num_threads(std::size_t n);
std::size_t num_threads();

// Fixed chunk length for point-parallel loops.
inline constexpr std::size_t kChunkSize = 1024;

inline std::size_t num_chunks(std::size_t count, std::size_t chunk = kChunkSize) {
  return (count + chunk - 1) / chunk;
}

// Calls fn(chunk_index, begin, end) once per chunk of [0, count). Chunks are
// distributed over up to num_threads() workers; fn must only write to
// state owned by its chunk.
void parallel_for_chunks(
    std::size_t count, std::size_t chunk,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline void parallel_for_chunks(
    std::size_t count,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  parallel_for_chunks(count, kChunkSize, fn);
}

}  // namespace hikm

#endif  // HIKM_PARALLEL_H_
