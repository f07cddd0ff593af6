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

#ifndef HIKM_KMEANS_H_
#define HIKM_KMEANS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hikm/rng.h"
#include "hikm/types.h"

namespace hikm {

struct KMeansResult {
  Matrix centroids;
  std::vector<std::uint32_t> assignment;
  // Sum of squared L2 distances to the assigned centroids.
  double distortion = 0.0;
  // Objective actually minimized: sum of ||x - c||^s (equals distortion
  // when s = 2).
  double objective = 0.0;
  std::size_t iters_run = 0;
  bool converged = false;
  // Objective after the initial assignment and after every iteration.
  std::vector<double> history;
};

struct LloydOptions {
  std::size_t max_iters = 100;
  // Stop once (prev - cur) <= tol * prev.
  double tol = 1e-4;
};

struct KMeansOptions {
  InitMethod init = InitMethod::kKMeansPlusPlus;
  std::uint64_t seed = 0;
  // Philox stream for initialization; see Stream::kInit.
  std::uint64_t stream = stream_id(Stream::kInit, 1, 0);
  std::size_t max_iters = 100;
  double tol = 1e-4;
  // Independent restarts (restart r > 0 uses stream ^ splitmix64(r)); the
  // lowest-distortion run wins, earliest on ties.
  std::size_t restarts = 1;
};

// Gradient-descent settings for the centroid step of power_kmeans.
struct DescentOptions {
  std::size_t steps = 50;
  double step_scale = 0.1;
  std::size_t max_iters = 100;
  double tol = 1e-4;
};

double squared_distance(std::span<const float> a, std::span<const float> b);

// D^2 sampling: first centroid uniform, each next one drawn with
// probability proportional to the squared distance to the nearest chosen
// centroid. Throws ArgumentError when k is 0 or exceeds the row count and
// DegenerateInputError when fewer than k distinct rows exist.
Matrix kmeanspp_init(const Matrix& data, std::size_t k, Rng& rng);
Matrix kmeanspp_init(const EmbeddingDataset& data, std::size_t k,
                     std::uint64_t seed);

// k distinct row indices drawn uniformly without replacement.
Matrix random_init(const Matrix& data, std::size_t k, Rng& rng);

// Nearest centroid under squared L2, lowest index on ties.
std::vector<std::uint32_t> assign(const Matrix& data, const Matrix& centroids);

// assign() followed by the empty-cluster repair used inside lloyd(); an empty
// centroid is moved onto the furthest point of a multi-member cluster.
std::vector<std::uint32_t> assign_nonempty(const Matrix& data, Matrix& centroids);

// sum_i ||x_i - c_{a_i}||^s for s >= 2.
double distortion(const Matrix& data, const Matrix& centroids,
                  std::span<const std::uint32_t> assignment, double s = 2.0);

KMeansResult lloyd(const Matrix& data, Matrix init_centroids,
                   const LloydOptions& options = {});

// Initialization followed by lloyd(), best of `options.restarts` runs.
KMeansResult kmeans(const Matrix& data, std::size_t k,
                    const KMeansOptions& options = {});

// Minimizes sum ||x - c||^s. Assignment is the squared-L2 rule; each
// centroid is refined by gradient descent started at the cluster mean.
// With s = 2 the mean is returned directly, so the result matches
// kmeans() with the same seed.
KMeansResult power_kmeans(const Matrix& data, std::size_t k, double s,
                          std::uint64_t seed, const DescentOptions& options = {});

// Minimizer of sum ||x - c||^s over the given member rows, by descent from
// the mean. Exposed for testing.
std::vector<double> power_centroid(const Matrix& data,
                                   std::span<const std::size_t> members,
                                   double s, const DescentOptions& options = {});

}  // namespace hikm

#endif  // HIKM_KMEANS_H_
