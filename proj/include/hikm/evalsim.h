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

#ifndef HIKM_EVALSIM_H_
#define HIKM_EVALSIM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hikm/density.h"
#include "hikm/kmeans.h"
#include "hikm/rng.h"
#include "hikm/types.h"

namespace hikm {

// ---------------------------------------------------------------------------
// 2-D mixture simulation.

struct GaussianComponent {
  double weight;
  double mean_x;
  double mean_y;
  double sigma;
};

// Gaussians plus a uniform component on the square [-half_width, half_width]^2.
// Draws outside the square are rejected and redrawn from the same component.
struct MixtureSpec {
  std::vector<GaussianComponent> gaussians = {
      {0.3, -1.5, -1.5, 0.35}, {0.3, 0.0, 1.5, 0.35}, {0.3, 1.5, -1.0, 0.35}};
  double uniform_weight = 0.1;
  double half_width = 3.0;
  std::size_t num_points = 9000;
};

// Uses Stream::kSimulation keyed by (1, 0).
EmbeddingDataset gen_mixture_2d(std::uint64_t seed, const MixtureSpec& spec = {});

// `count` points uniform on `box`, Stream::kSimulation keyed by (4, 0).
Matrix uniform_points(const Box& box, std::size_t count, std::uint64_t seed);

// One clustering configuration of the simulation study; every
// configuration ends with the same number of top-level clusters.
struct SimulationConfig {
  std::string name;
  std::vector<std::size_t> k;
  std::size_t resample_steps = 0;
};

struct SimulationOptions {
  std::vector<SimulationConfig> configs = {
      {"1-level", {300}, 0},
      {"2-level", {3000, 300}, 0},
      {"3-level", {3000, 1000, 300}, 0},
      {"3-level+resampling", {3000, 1000, 300}, 10},
  };
  // Fixed KDE bandwidth shared by all configurations; 0 selects Scott's rule
  // for top_k uniform points on the square (closed form).
  double bandwidth = 0.0;
  std::size_t resolution = 100;
  std::size_t max_iters = 100;
  double tol = 1e-4;
  MixtureSpec mixture;
};

struct SimulationRow {
  std::string config;
  std::uint64_t seed = 0;
  double kl_to_uniform = 0.0;
  Matrix centroids;  // top-level centroids (or the random points)
};

// The configurations above plus a "random-baseline" row: KDE of top_k
// uniform points on the square.
std::vector<SimulationRow> run_simulation(std::uint64_t seed,
                                          const SimulationOptions& options = {});

double default_simulation_bandwidth(std::size_t top_k, double half_width);

// ---------------------------------------------------------------------------
// Lemma check on discrete distributions.

struct Lemma1Result {
  double kl_q_u = 0.0;
  double kl_p_u = 0.0;
  bool holds = false;
};

// Slack allowed on the inequality for floating-point noise.
inline constexpr double kLemmaSlack = 1e-12;

// q = p^t / sum p^t; compares KL(q || u) and KL(p || u) with u uniform on
// p's support. Throws ArgumentError unless 0 < t < 1.
Lemma1Result lemma1_check(const DiscreteDist& p, double t);

// Random distribution with support size uniform in [1, max_support] and
// heavy-tailed weights (Exp(1)^gamma, gamma uniform in [0.2, 5]).
DiscreteDist random_distribution(Rng& rng, std::size_t max_support);

struct Lemma1Sweep {
  double t = 0.0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  // Largest kl_q_u - kl_p_u observed (negative when the bound held with room).
  double worst_gap = 0.0;
};

// `trials` random distributions per t value, drawn from Stream::kSimulation
// keyed by (6, index of t).
std::vector<Lemma1Sweep> lemma1_sweep(std::size_t trials,
                                      std::span<const double> ts,
                                      std::size_t max_support, std::uint64_t seed);

// ---------------------------------------------------------------------------
// 1-D centroid-density experiment.

struct Density1D {
  enum class Kind { kUniform, kTruncatedNormal, kBimodal, kExponential };
  Kind kind = Kind::kTruncatedNormal;
  double lo = -3.0;
  double hi = 3.0;

  // Unnormalized density on [lo, hi].
  double pdf(double x) const;
  std::string name() const;

  static Density1D uniform() { return {Kind::kUniform, 0.0, 1.0}; }
  static Density1D truncated_normal() { return {Kind::kTruncatedNormal, -3.0, 3.0}; }
  // 0.7 N(-1.5, 0.5^2) + 0.3 N(1.5, 0.5^2) on [-3, 3].
  static Density1D bimodal() { return {Kind::kBimodal, -3.0, 3.0}; }
  // Rate-1 exponential on [0, 5].
  static Density1D exponential() { return {Kind::kExponential, 0.0, 5.0}; }
};

// Rejection sampling; Stream::kSimulation keyed by (3, 0).
std::vector<double> sample_density(const Density1D& density, std::size_t count,
                                   std::uint64_t seed);

// Probability mass of pdf^exponent in each of `bins` equal bins, normalized.
std::vector<double> bin_masses(const Density1D& density, double exponent,
                               std::size_t bins);

struct ZadorResult {
  std::vector<double> centroids;  // sorted
  std::vector<double> histogram;  // normalized centroid counts per bin
  double kl_vs_p = 0.0;
  double kl_vs_p13 = 0.0;
  double kl_vs_uniform = 0.0;
  bool converged = false;
};

inline constexpr std::size_t kZadorBins = 8;

// Lloyd iterations creep slowly in 1-D once s > 2; the default cap of 100
// stops well short of a fixed point, so the experiment allows more.
inline constexpr std::size_t kZadorMaxIters = 500;

inline DescentOptions zador_descent() {
  DescentOptions d;
  d.max_iters = kZadorMaxIters;
  return d;
}

ZadorResult zador_experiment_1d(const Density1D& density, std::size_t num_samples,
                                std::size_t k, double s, std::uint64_t seed,
                                std::size_t bins = kZadorBins,
                                const DescentOptions& descent = zador_descent());

// ---------------------------------------------------------------------------
// Class-imbalance tools.

// Ranks classes by a seeded permutation and keeps
//   min(size, max(1, floor(max_class_size * rank^-alpha)))
// members of the rank-th class, drawn uniformly without replacement.
// Returns ascending point indices.
std::vector<std::uint64_t> imbalance_resample(std::span<const std::uint32_t> labels,
                                              double alpha, std::uint64_t seed);

struct LabeledPool {
  EmbeddingDataset data;
  std::vector<std::uint32_t> labels;
};

// Gaussian blobs (unit variance) with class sizes proportional to
// rank^-alpha summing to `num_points`; centers uniform in
// [-spread, spread]^dim. Stream::kSimulation keyed by (5, *).
LabeledPool gen_power_law_pool(std::size_t num_classes, double alpha,
                               std::size_t num_points, std::size_t dim,
                               double spread, std::uint64_t seed);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

// Least squares y = slope * x + intercept; NaN slope when x has no spread.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct ClassBalance {
  std::uint32_t class_id = 0;
  std::size_t class_size = 0;
  std::size_t cluster_count = 0;
  double mean_cluster_size = 0.0;  // NaN when cluster_count == 0
  bool has_clusters() const { return cluster_count > 0; }
};

struct BalanceStats {
  std::vector<ClassBalance> classes;  // ascending class id
  std::vector<std::uint32_t> cluster_label;  // per top-level cluster
  LineFit count_fit;       // class size -> cluster count
  LineFit mean_size_fit;   // class size -> mean cluster size
};

inline constexpr std::size_t kDefaultKnn = 5;

// Attributes each top-level centroid to the majority label among its knn
// nearest data points (lowest label on ties) and summarizes per class.
BalanceStats balance_stats(const ClusterTree& tree, const EmbeddingDataset& data,
                           std::span<const std::uint32_t> labels,
                           std::size_t knn = kDefaultKnn);

}  // namespace hikm

#endif  // HIKM_EVALSIM_H_
