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

// Independent reference implementations used only by the tests. They are
// deliberately naive (exhaustive scans, O(n^2 k) dynamic programming) so they
// share no code paths with the library under test.
#ifndef HIKM_TESTS_ORACLES_H_
#define HIKM_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <string>
#include <span>
#include <vector>

#include <unistd.h>

#include "hikm/types.h"

namespace oracle {

// Exhaustive scan for the smallest n in [0, target] minimizing
// |target - sum_j min(n, s_j)|.
inline std::size_t allocate(std::size_t target, const std::vector<std::size_t>& sizes) {
  std::size_t best_n = 0;
  long double best = std::numeric_limits<long double>::infinity();
  for (std::size_t n = 0; n <= target; ++n) {
    std::size_t total = 0;
    for (std::size_t s : sizes) total += std::min(n, s);
    const long double r = std::fabs(static_cast<long double>(target) -
                                    static_cast<long double>(total));
    if (r < best) {
      best = r;
      best_n = n;
    }
  }
  return best_n;
}

// Exact optimal 1-D k-means cost (sum of squared deviations) by dynamic
// programming over sorted values; optimal clusters are contiguous runs.
inline double optimal_kmeans_1d(std::vector<double> x, std::size_t k) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  std::vector<long double> s1(n + 1, 0.0L), s2(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    s1[i + 1] = s1[i] + x[i];
    s2[i + 1] = s2[i] + static_cast<long double>(x[i]) * x[i];
  }
  auto cost = [&](std::size_t a, std::size_t b) {  // half-open [a, b)
    const long double m = static_cast<long double>(b - a);
    const long double s = s1[b] - s1[a];
    return (s2[b] - s2[a]) - s * s / m;
  };
  const long double inf = std::numeric_limits<long double>::infinity();
  std::vector<long double> prev(n + 1, inf), cur(n + 1, inf);
  prev[0] = 0.0L;
  for (std::size_t c = 1; c <= k; ++c) {
    std::fill(cur.begin(), cur.end(), inf);
    for (std::size_t b = c; b <= n; ++b) {
      for (std::size_t a = c - 1; a < b; ++a) {
        if (prev[a] == inf) continue;
        cur[b] = std::min(cur[b], prev[a] + cost(a, b));
      }
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[n]);
}

// 5000 points equally spaced on [0.9, 1.1] plus {2, 2, 3, 3}.
inline hikm::Matrix toy_set() {
  const std::size_t dense = 5000;
  hikm::Matrix m(dense + 4, 1);
  for (std::size_t i = 0; i < dense; ++i) {
    m(i, 0) = static_cast<float>(0.9 + 0.2 * static_cast<double>(i) /
                                           static_cast<double>(dense - 1));
  }
  m(dense, 0) = 2.0f;
  m(dense + 1, 0) = 2.0f;
  m(dense + 2, 0) = 3.0f;
  m(dense + 3, 0) = 3.0f;
  return m;
}

inline std::vector<double> column(const hikm::Matrix& m) {
  std::vector<double> v;
  for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m(i, 0));
  return v;
}

inline double sq_dist(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

// Indices of `members` sorted by (distance to centre, index).
inline std::vector<std::size_t> by_distance(const std::vector<std::size_t>& members,
                                            const hikm::Matrix& points,
                                            std::span<const float> centre) {
  std::vector<std::size_t> out = members;
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    const double da = sq_dist(points.row(a), centre);
    const double db = sq_dist(points.row(b), centre);
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

// Leaves under (level, node) found by walking every point upward.
inline std::vector<std::size_t> leaves_by_ascent(const hikm::ClusterTree& tree,
                                                 std::size_t level, std::size_t node) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tree.num_points; ++i) {
    std::size_t id = i;
    for (std::size_t t = 1; t <= level; ++t) id = tree.level(t).assignment[id];
    if (id == node) out.push_back(i);
  }
  return out;
}

// Plain KL(p || q) by direct summation over p's support.
inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("hikm_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle

#endif  // HIKM_TESTS_ORACLES_H_
