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

#ifndef HIKM_HIERARCHY_H_
#define HIKM_HIERARCHY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hikm/types.h"

namespace hikm {

// The min(r, |members|) members closest to `centroid` (squared L2, lowest
// index on ties), returned in ascending index order.
std::vector<std::size_t> resample_cluster(std::span<const std::size_t> members,
                                          const Matrix& points,
                                          std::span<const float> centroid,
                                          std::size_t r);

// Default per-level resample count: half the average cluster size, rounded
// up, at least 1.
std::size_t default_resample_count(std::size_t input_size, std::size_t k);

// Hierarchical k-means with resampling-clustering. Level t clusters the data
// (t = 1) or the level t-1 centroids into k_t clusters; on resampled levels
// it then repeats `resample_steps` times: keep the r_t members closest to
// each centroid, rerun k-means on that subset, reassign the full level
// input. k-means at (level t, step s) is seeded from
// stream_id(Stream::kInit, t, s).
ClusterTree build_hierarchy(const EmbeddingDataset& data,
                            const ClusterConfig& config);

// Number of data points under each node, per level: counts[t-1][j].
std::vector<std::vector<std::size_t>> leaf_counts(const ClusterTree& tree);

std::size_t subtree_leaf_count(const ClusterTree& tree, std::size_t level,
                               std::size_t node);

// Level t-1 nodes (or data points when t = 1) whose parent is node j of
// level t, for every j. Each list is ascending.
std::vector<std::vector<std::size_t>> children(const ClusterTree& tree,
                                               std::size_t level);

// Data points reachable from node (level, node), ascending.
std::vector<std::size_t> subtree_leaves(const ClusterTree& tree,
                                        std::size_t level, std::size_t node);

// Throws ValidationError unless, at every level, the leaf sets of the
// nodes are disjoint and cover 0..n-1.
void check_partition(const ClusterTree& tree);

// Gini coefficient of a list of nonnegative counts (0 = perfectly even).
double gini(std::span<const std::size_t> counts);

}  // namespace hikm

#endif  // HIKM_HIERARCHY_H_
