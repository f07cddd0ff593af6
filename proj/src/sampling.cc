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

#include "hikm/sampling.h"

#include <algorithm>
#include <string>

#include "hikm/hierarchy.h"
#include "hikm/kmeans.h"
#include "hikm/parallel.h"
#include "hikm/rng.h"

namespace hikm {
namespace {

void check_inputs(const ClusterTree& tree, const EmbeddingDataset& data,
                  const SampleSpec& spec) {
  if (tree.levels.empty()) throw ArgumentError("empty tree");
  if (tree.num_points != data.size() || tree.dim != data.dim()) {
    throw ArgumentError("tree describes " + std::to_string(tree.num_points) +
                        "x" + std::to_string(tree.dim) + " data, got " +
                        std::to_string(data.size()) + "x" +
                        std::to_string(data.dim()));
  }
  if (spec.target > data.size()) {
    throw ArgumentError("target size exceeds dataset size");
  }
}

// Draws per-cluster samples in parallel and merges them in cluster order.
std::vector<std::uint64_t> draw_all(
    const std::vector<std::vector<std::size_t>>& leaf_sets,
    const std::vector<std::size_t>& quotas, const Matrix& centroids,
    const EmbeddingDataset& data, const SampleSpec& spec, std::size_t level) {
  std::vector<std::vector<std::size_t>> picked(leaf_sets.size());
  parallel_for_chunks(leaf_sets.size(), 16,
                      [&](std::size_t, std::size_t begin, std::size_t end) {
                        for (std::size_t j = begin; j < end; ++j) {
                          picked[j] = pick_members(leaf_sets[j], data,
                                                   centroids.row(j), quotas[j],
                                                   spec.strategy, spec.seed,
                                                   level, j);
                        }
                      });
  std::vector<std::uint64_t> out;
  for (const auto& p : picked) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::size_t allocated_total(std::size_t cap, std::span<const std::size_t> sizes) {
  std::size_t total = 0;
  for (std::size_t s : sizes) total += std::min(cap, s);
  return total;
}

std::size_t allocate(std::size_t target, std::span<const std::size_t> sizes) {
  // Smallest n in [0, target] with total(n) >= target, if any.
  std::size_t lo = 0;
  std::size_t hi = target;
  if (allocated_total(target, sizes) < target) {
    // The target is out of reach; total(n) is flat from max(sizes) on.
    std::size_t largest = 0;
    for (std::size_t s : sizes) largest = std::max(largest, s);
    return std::min(target, largest);
  }
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (allocated_total(mid, sizes) >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == 0) return 0;
  const std::size_t over = allocated_total(lo, sizes) - target;
  const std::size_t under = target - allocated_total(lo - 1, sizes);
  return under <= over ? lo - 1 : lo;
}

SamplePlan plan_hierarchical(const ClusterTree& tree, std::size_t target) {
  if (tree.levels.empty()) throw ArgumentError("empty tree");
  const auto counts = leaf_counts(tree);
  const std::size_t top = tree.num_levels();

  std::vector<std::size_t> quota(counts[top - 1].size());
  {
    const std::size_t cap = allocate(target, counts[top - 1]);
    for (std::size_t j = 0; j < quota.size(); ++j) {
      quota[j] = std::min(cap, counts[top - 1][j]);
    }
  }
  for (std::size_t t = top; t > 1; --t) {
    const auto kids = children(tree, t);
    const auto& child_counts = counts[t - 2];
    std::vector<std::size_t> next(child_counts.size(), 0);
    for (std::size_t j = 0; j < kids.size(); ++j) {
      std::vector<std::size_t> sizes;
      sizes.reserve(kids[j].size());
      for (std::size_t c : kids[j]) sizes.push_back(child_counts[c]);
      const std::size_t cap = allocate(quota[j], sizes);
      for (std::size_t c : kids[j]) next[c] = std::min(cap, child_counts[c]);
    }
    quota = std::move(next);
  }
  SamplePlan plan;
  plan.quotas = std::move(quota);
  for (std::size_t q : plan.quotas) plan.total += q;
  return plan;
}

std::vector<std::size_t> pick_members(std::span<const std::size_t> members,
                                      const EmbeddingDataset& data,
                                      std::span<const float> centroid,
                                      std::size_t quota,
                                      SampleStrategy strategy,
                                      std::uint64_t seed, std::size_t level,
                                      std::size_t node) {
  std::vector<std::size_t> out;
  if (quota >= members.size()) {
    out.assign(members.begin(), members.end());
  } else if (strategy == SampleStrategy::kRandom) {
    std::vector<std::size_t> pool(members.begin(), members.end());
    std::sort(pool.begin(), pool.end());
    Rng rng(seed, Stream::kSampling, level, node);
    shuffle_prefix(std::span<std::size_t>(pool), quota, rng);
    out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(quota));
  } else {
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(members.size());
    const bool closest = strategy == SampleStrategy::kClosest;
    for (std::size_t i : members) {
      const double d = squared_distance(data.point(i), centroid);
      keyed.emplace_back(closest ? d : -d, i);
    }
    const auto mid = keyed.begin() + static_cast<std::ptrdiff_t>(quota);
    std::partial_sort(keyed.begin(), mid, keyed.end());
    for (auto it = keyed.begin(); it != mid; ++it) out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> flat_sample(const ClusterTree& tree,
                                       const EmbeddingDataset& data,
                                       const SampleSpec& spec) {
  check_inputs(tree, data, spec);
  const std::size_t top = tree.num_levels();
  const auto counts = leaf_counts(tree)[top - 1];
  const std::size_t cap = allocate(spec.target, counts);
  std::vector<std::vector<std::size_t>> leaf_sets(counts.size());
  for (std::size_t i = 0; i < tree.num_points; ++i) {
    std::size_t node = i;
    for (const TreeLevel& lv : tree.levels) node = lv.assignment[node];
    leaf_sets[node].push_back(i);
  }
  std::vector<std::size_t> quotas(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    quotas[j] = std::min(cap, counts[j]);
  }
  return draw_all(leaf_sets, quotas, tree.top().centroids, data, spec, top);
}

std::vector<std::uint64_t> hierarchical_sample(const ClusterTree& tree,
                                               const EmbeddingDataset& data,
                                               const SampleSpec& spec) {
  check_inputs(tree, data, spec);
  const SamplePlan plan = plan_hierarchical(tree, spec.target);
  return draw_all(children(tree, 1), plan.quotas, tree.level(1).centroids,
                  data, spec, 1);
}

std::vector<std::uint64_t> sample(const ClusterTree& tree,
                                  const EmbeddingDataset& data,
                                  const SampleSpec& spec) {
  return spec.mode == SampleMode::kFlat ? flat_sample(tree, data, spec)
                                        : hierarchical_sample(tree, data, spec);
}

}  // namespace hikm
