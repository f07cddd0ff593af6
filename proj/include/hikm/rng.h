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

#ifndef HIKM_RNG_H_
#define HIKM_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace hikm {

// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

// Stream domains. A stream id is
//   splitmix64(splitmix64(splitmix64(domain) ^ a) ^ b)
// where (a, b) are domain-specific keys:
//   kInit:       a = level (1-based), b = resampling step (0 = first run)
//   kSampling:   a = tree level of the cluster, b = cluster id
//   kSimulation: a = generator id, b = sub-stream (class id, trial, ...)
enum class Stream : std::uint64_t {
  kInit = 1,
  kSampling = 2,
  kSimulation = 3,
};

std::uint64_t stream_id(Stream domain, std::uint64_t a = 0,
                        std::uint64_t b = 0);

// Counter-based generator. The Philox key is the 64-bit seed; the 128-bit
// counter holds (block index, stream id). Values are consumed two 64-bit
// words per block, low word first, so a (seed, stream) pair yields the same
// sequence on every platform.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  Rng(std::uint64_t seed, Stream domain, std::uint64_t a = 0,
      std::uint64_t b = 0)
      : Rng(seed, stream_id(domain, a, b)) {}

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform in [0, n); n must be > 0. Unbiased (Lemire's method).
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

// Partial Fisher-Yates: after the call the first `count` entries are a
// uniform draw without replacement from `items`.
template <typename T>
void shuffle_prefix(std::span<T> items, std::size_t count, Rng& rng) {
  const std::size_t n = items.size();
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(items[i], items[j]);
  }
}

}  // namespace hikm

#endif  // HIKM_RNG_H_
