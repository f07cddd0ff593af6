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

#ifndef HIKM_SAMPLING_H_
#define HIKM_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hikm/types.h"

namespace hikm {

// Smallest integer cap n in [0, target] minimizing
// |target - sum_j min(n, sizes_j)|, found by binary search.
std::size_t allocate(std::size_t target, std::span<const std::size_t> sizes);

// sum_j min(cap, sizes_j)
std::size_t allocated_total(std::size_t cap, std::span<const std::size_t> sizes);

// Per-level-1-cluster quotas a sampling run will draw.
struct SamplePlan {
  std::vector<std::size_t> quotas;  // one per level-1 cluster
  std::size_t total = 0;
};

// Quota recursion of hierarchical sampling: the target is split over the
// top-level nodes with allocate(), then each node's quota over its
// children, down to level 1. Depends only on tree structure.
SamplePlan plan_hierarchical(const ClusterTree& tree, std::size_t target);

// Takes min(n*, leaf count) points from every top-level subtree, with
// n* = allocate(target, top-level leaf counts). "c"/"f" rank by distance to
// the top-level centroid; "r" draws from Stream::kSampling keyed by
// (top level, node). Output ascending and duplicate-free.
std::vector<std::uint64_t> flat_sample(const ClusterTree& tree,
                                       const EmbeddingDataset& data,
                                       const SampleSpec& spec);

// Draws plan_hierarchical() quotas from each level-1 cluster; "c"/"f" rank
// by distance to the level-1 centroid, "r" uses Stream::kSampling keyed by
// (1, cluster). Output ascending and duplicate-free.
std::vector<std::uint64_t> hierarchical_sample(const ClusterTree& tree,
                                               const EmbeddingDataset& data,
                                               const SampleSpec& spec);

// Dispatches on spec.mode. Throws ArgumentError when the tree does not
// describe `data` or the target exceeds n.
std::vector<std::uint64_t> sample(const ClusterTree& tree,
                                  const EmbeddingDataset& data,
                                  const SampleSpec& spec);

// Picks `quota` of `members` by the given strategy. Exposed for testing.
std::vector<std::size_t> pick_members(std::span<const std::size_t> members,
                                      const EmbeddingDataset& data,
                                      std::span<const float> centroid,
                                      std::size_t quota,
                                      SampleStrategy strategy,
                                      std::uint64_t seed, std::size_t level,
                                      std::size_t node);

}  // namespace hikm

#endif  // HIKM_SAMPLING_H_
