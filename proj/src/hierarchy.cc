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

#include "hikm/hierarchy.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "hikm/io.h"
#include "hikm/kmeans.h"
#include "hikm/rng.h"

namespace hikm {

std::vector<std::size_t> resample_cluster(std::span<const std::size_t> members,
                                          const Matrix& points,
                                          std::span<const float> centroid,
                                          std::size_t r) {
  if (r >= members.size()) {
    std::vector<std::size_t> all(members.begin(), members.end());
    std::sort(all.begin(), all.end());
    return all;
  }
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(members.size());
  for (std::size_t i : members) {
    keyed.emplace_back(squared_distance(points.row(i), centroid), i);
  }
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(r),
                    keyed.end());
  std::vector<std::size_t> out;
  out.reserve(r);
  for (std::size_t i = 0; i < r; ++i) out.push_back(keyed[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t default_resample_count(std::size_t input_size, std::size_t k) {
  // ceil(input / k / 2)
  return std::max<std::size_t>(1, (input_size + 2 * k - 1) / (2 * k));
}

ClusterTree build_hierarchy(const EmbeddingDataset& data,
                            const ClusterConfig& config) {
  config.validate();
  ClusterTree tree;
  tree.num_points = data.size();
  tree.dim = data.dim();
  tree.data_checksum = dataset_checksum(data);

  const Matrix* input = &data.points();
  for (std::size_t t = 1; t <= config.num_levels(); ++t) {
    const std::size_t k = config.k[t - 1];
    if (k > input->rows()) {
      throw ArgumentError("level " + std::to_string(t) +
                          ": k exceeds input size (" + std::to_string(k) +
                          " > " + std::to_string(input->rows()) + ")");
    }
    KMeansOptions opts;
    opts.init = config.init;
    opts.seed = config.seed;
    opts.max_iters = config.max_iters;
    opts.tol = config.tol;
    opts.stream = stream_id(Stream::kInit, t, 0);
    KMeansResult km = kmeans(*input, k, opts);

    TreeLevel level{std::move(km.centroids), std::move(km.assignment)};
    if (config.resamples_level(t)) {
      const std::size_t r = config.resample_counts.empty()
                                ? default_resample_count(input->rows(), k)
                                : config.resample_counts[t - 1];
      for (std::size_t step = 1; step <= config.resample_steps; ++step) {
        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t i = 0; i < level.assignment.size(); ++i) {
          members[level.assignment[i]].push_back(i);
        }
        std::vector<std::size_t> subset;
        for (std::size_t j = 0; j < k; ++j) {
          const auto kept =
              resample_cluster(members[j], *input, level.centroids.row(j), r);
          subset.insert(subset.end(), kept.begin(), kept.end());
        }
        std::sort(subset.begin(), subset.end());
        const Matrix resampled = input->gather(subset);
        opts.stream = stream_id(Stream::kInit, t, step);
        KMeansResult refit = kmeans(resampled, k, opts);
        level.assignment = assign_nonempty(*input, refit.centroids);
        level.centroids = std::move(refit.centroids);
      }
    }
    tree.levels.push_back(std::move(level));
    input = &tree.levels.back().centroids;
  }
  tree.validate();
  return tree;
}

std::vector<std::vector<std::size_t>> leaf_counts(const ClusterTree& tree) {
  std::vector<std::vector<std::size_t>> counts;
  counts.reserve(tree.num_levels());
  for (std::size_t t = 1; t <= tree.num_levels(); ++t) {
    const TreeLevel& lv = tree.level(t);
    std::vector<std::size_t> c(lv.num_clusters(), 0);
    for (std::size_t i = 0; i < lv.assignment.size(); ++i) {
      c[lv.assignment[i]] += t == 1 ? 1 : counts.back()[i];
    }
    counts.push_back(std::move(c));
  }
  return counts;
}

std::size_t subtree_leaf_count(const ClusterTree& tree, std::size_t level,
                               std::size_t node) {
  if (level == 0 || level > tree.num_levels() ||
      node >= tree.level(level).num_clusters()) {
    throw ArgumentError("invalid node (" + std::to_string(level) + ", " +
                        std::to_string(node) + ")");
  }
  return leaf_counts(tree)[level - 1][node];
}

std::vector<std::vector<std::size_t>> children(const ClusterTree& tree,
                                               std::size_t level) {
  const TreeLevel& lv = tree.level(level);
  std::vector<std::vector<std::size_t>> out(lv.num_clusters());
  for (std::size_t i = 0; i < lv.assignment.size(); ++i) {
    out[lv.assignment[i]].push_back(i);
  }
  return out;
}

std::vector<std::size_t> subtree_leaves(const ClusterTree& tree,
                                        std::size_t level, std::size_t node) {
  if (level == 0 || level > tree.num_levels() ||
      node >= tree.level(level).num_clusters()) {
    throw ArgumentError("invalid node (" + std::to_string(level) + ", " +
                        std::to_string(node) + ")");
  }
  std::vector<std::size_t> frontier{node};
  for (std::size_t t = level; t >= 1; --t) {
    const auto& assignment = tree.level(t).assignment;
    std::vector<char> wanted(tree.level(t).num_clusters(), 0);
    for (std::size_t j : frontier) wanted[j] = 1;
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (wanted[assignment[i]]) next.push_back(i);
    }
    frontier = std::move(next);
  }
  return frontier;
}

void check_partition(const ClusterTree& tree) {
  for (std::size_t t = 1; t <= tree.num_levels(); ++t) {
    std::vector<std::size_t> seen(tree.num_points, 0);
    for (std::size_t j = 0; j < tree.level(t).num_clusters(); ++j) {
      for (std::size_t leaf : subtree_leaves(tree, t, j)) ++seen[leaf];
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i] != 1) {
        throw ValidationError("level " + std::to_string(t) + ": point " +
                              std::to_string(i) + " reached " +
                              std::to_string(seen[i]) + " times");
      }
    }
  }
}

double gini(std::span<const std::size_t> counts) {
  if (counts.empty()) return 0.0;
  std::vector<double> v(counts.begin(), counts.end());
  std::sort(v.begin(), v.end());
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total == 0.0) return 0.0;
  const auto n = static_cast<double>(v.size());
  double weighted = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * v[i];
  }
  return weighted / (n * total);
}

}  // namespace hikm
