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

#include "hikm/evalsim.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "hikm/hierarchy.h"
#include "hikm/parallel.h"
#include "hikm/rng.h"

namespace hikm {
namespace {

constexpr std::uint64_t kMixtureGenerator = 1;
constexpr std::uint64_t kImbalanceGenerator = 2;
constexpr std::uint64_t kDensityGenerator = 3;
constexpr std::uint64_t kUniformGenerator = 4;
constexpr std::uint64_t kPoolGenerator = 5;
constexpr std::uint64_t kLemmaGenerator = 6;

double gauss(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z);
}

}  // namespace

EmbeddingDataset gen_mixture_2d(std::uint64_t seed, const MixtureSpec& spec) {
  if (spec.num_points == 0) throw ArgumentError("mixture needs num_points >= 1");
  std::vector<double> weights;
  for (const auto& g : spec.gaussians) weights.push_back(g.weight);
  weights.push_back(spec.uniform_weight);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ArgumentError("mixture weights must sum to > 0");

  Rng rng(seed, Stream::kSimulation, kMixtureGenerator, 0);
  const double a = spec.half_width;
  Matrix points(spec.num_points, 2);
  for (std::size_t i = 0; i < spec.num_points; ++i) {
    double u = rng.uniform() * total;
    std::size_t comp = 0;
    while (comp + 1 < weights.size() && u >= weights[comp]) {
      u -= weights[comp];
      ++comp;
    }
    double x = 0.0, y = 0.0;
    if (comp == spec.gaussians.size()) {
      x = -a + 2.0 * a * rng.uniform();
      y = -a + 2.0 * a * rng.uniform();
    } else {
      const auto& g = spec.gaussians[comp];
      do {
        x = g.mean_x + g.sigma * rng.normal();
        y = g.mean_y + g.sigma * rng.normal();
      } while (std::abs(x) > a || std::abs(y) > a);
    }
    points(i, 0) = static_cast<float>(x);
    points(i, 1) = static_cast<float>(y);
  }
  return EmbeddingDataset(std::move(points));
}

Matrix uniform_points(const Box& box, std::size_t count, std::uint64_t seed) {
  Rng rng(seed, Stream::kSimulation, kUniformGenerator, 0);
  Matrix points(count, box.dim());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t a = 0; a < box.dim(); ++a) {
      points(i, a) = static_cast<float>(box.lo[a] + (box.hi[a] - box.lo[a]) * rng.uniform());
    }
  }
  return points;
}

double default_simulation_bandwidth(std::size_t top_k, double half_width) {
  const double sd = 2.0 * half_width / std::sqrt(12.0);
  return sd * std::pow(static_cast<double>(top_k), -1.0 / 6.0);
}

std::vector<SimulationRow> run_simulation(std::uint64_t seed,
                                          const SimulationOptions& options) {
  if (options.configs.empty()) throw ArgumentError("no simulation configs");
  const EmbeddingDataset data = gen_mixture_2d(seed, options.mixture);
  const double a = options.mixture.half_width;
  const Box omega = Box::square(-a, a);
  const std::size_t top_k = options.configs.front().k.back();
  const double h = options.bandwidth > 0.0
                       ? options.bandwidth
                       : default_simulation_bandwidth(top_k, a);
  const std::vector<double> bandwidth(2, h);

  std::vector<SimulationRow> rows;
  for (const SimulationConfig& sc : options.configs) {
    ClusterConfig cfg;
    cfg.k = sc.k;
    cfg.resample_steps = sc.resample_steps;
    cfg.seed = seed;
    cfg.max_iters = options.max_iters;
    cfg.tol = options.tol;
    const ClusterTree tree = build_hierarchy(data, cfg);
    SimulationRow row;
    row.config = sc.name;
    row.seed = seed;
    row.centroids = tree.top().centroids;
    row.kl_to_uniform =
        kl_to_uniform(kde(row.centroids, bandwidth, options.resolution, omega));
    rows.push_back(std::move(row));
  }
  SimulationRow baseline;
  baseline.config = "random-baseline";
  baseline.seed = seed;
  baseline.centroids = uniform_points(omega, top_k, seed);
  baseline.kl_to_uniform =
      kl_to_uniform(kde(baseline.centroids, bandwidth, options.resolution, omega));
  rows.push_back(std::move(baseline));
  return rows;
}

Lemma1Result lemma1_check(const DiscreteDist& p, double t) {
  if (!(t > 0.0 && t < 1.0)) throw ArgumentError("t must lie in (0, 1)");
  const std::size_t k = p.size();
  std::vector<double> q(k);
  double z = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    q[i] = std::pow(p[i], t);
    z += q[i];
  }
  for (double& v : q) v /= z;
  const std::vector<double> u(k, 1.0 / static_cast<double>(k));
  Lemma1Result r;
  r.kl_q_u = kl_divergence(q, u);
  r.kl_p_u = kl_divergence(p.probabilities(), u);
  r.holds = r.kl_q_u <= r.kl_p_u + kLemmaSlack;
  return r;
}

DiscreteDist random_distribution(Rng& rng, std::size_t max_support) {
  const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_index(max_support));
  const double gamma = 0.2 + 4.8 * rng.uniform();
  std::vector<double> w(k);
  for (double& v : w) {
    v = std::pow(-std::log(1.0 - rng.uniform()), gamma);
    v = std::max(v, 1e-300);
  }
  return DiscreteDist::from_weights(w);
}

std::vector<Lemma1Sweep> lemma1_sweep(std::size_t trials,
                                      std::span<const double> ts,
                                      std::size_t max_support, std::uint64_t seed) {
  if (max_support == 0) throw ArgumentError("max_support must be >= 1");
  std::vector<Lemma1Sweep> out;
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    Lemma1Sweep sweep;
    sweep.t = ts[ti];
    sweep.trials = trials;
    sweep.worst_gap = -std::numeric_limits<double>::infinity();
    Rng rng(seed, Stream::kSimulation, kLemmaGenerator, ti);
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const DiscreteDist p = random_distribution(rng, max_support);
      const Lemma1Result r = lemma1_check(p, ts[ti]);
      if (!r.holds) ++sweep.violations;
      sweep.worst_gap = std::max(sweep.worst_gap, r.kl_q_u - r.kl_p_u);
    }
    out.push_back(sweep);
  }
  return out;
}

double Density1D::pdf(double x) const {
  if (x < lo || x > hi) return 0.0;
  switch (kind) {
    case Kind::kUniform:
      return 1.0;
    case Kind::kTruncatedNormal:
      return gauss(x, 0.0, 1.0);
    case Kind::kBimodal:
      return 0.7 * gauss(x, -1.5, 0.5) + 0.3 * gauss(x, 1.5, 0.5);
    case Kind::kExponential:
      return std::exp(-(x - lo));
  }
  return 0.0;
}

std::string Density1D::name() const {
  switch (kind) {
    case Kind::kUniform:
      return "uniform";
    case Kind::kTruncatedNormal:
      return "truncated-normal";
    case Kind::kBimodal:
      return "bimodal";
    case Kind::kExponential:
      return "exponential";
  }
  return "?";
}

std::vector<double> sample_density(const Density1D& density, std::size_t count,
                                   std::uint64_t seed) {
  double peak = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    peak = std::max(peak, density.pdf(density.lo + (density.hi - density.lo) * i / 2000.0));
  }
  peak *= 1.05;
  Rng rng(seed, Stream::kSimulation, kDensityGenerator, 0);
  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count) {
    const double x = density.lo + (density.hi - density.lo) * rng.uniform();
    if (rng.uniform() * peak < density.pdf(x)) out.push_back(x);
  }
  return out;
}

std::vector<double> bin_masses(const Density1D& density, double exponent,
                               std::size_t bins) {
  constexpr std::size_t kSub = 256;
  const double width = (density.hi - density.lo) / static_cast<double>(bins);
  std::vector<double> mass(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b) {
    for (std::size_t s = 0; s < kSub; ++s) {
      const double x = density.lo + width * (static_cast<double>(b) +
                                             (static_cast<double>(s) + 0.5) / kSub);
      mass[b] += std::pow(density.pdf(x), exponent);
    }
  }
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  for (double& m : mass) m /= total;
  return mass;
}

ZadorResult zador_experiment_1d(const Density1D& density, std::size_t num_samples,
                                std::size_t k, double s, std::uint64_t seed,
                                std::size_t bins, const DescentOptions& descent) {
  if (bins == 0) throw ArgumentError("bins must be >= 1");
  const std::vector<double> xs = sample_density(density, num_samples, seed);
  Matrix data(xs.size(), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) data(i, 0) = static_cast<float>(xs[i]);
  const KMeansResult km = power_kmeans(data, k, s, seed, descent);

  ZadorResult r;
  r.converged = km.converged;
  for (std::size_t j = 0; j < km.centroids.rows(); ++j) {
    r.centroids.push_back(km.centroids(j, 0));
  }
  std::sort(r.centroids.begin(), r.centroids.end());
  r.histogram.assign(bins, 0.0);
  const double width = (density.hi - density.lo) / static_cast<double>(bins);
  for (double c : r.centroids) {
    auto b = static_cast<std::ptrdiff_t>(std::floor((c - density.lo) / width));
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    r.histogram[static_cast<std::size_t>(b)] += 1.0;
  }
  for (double& h : r.histogram) h /= static_cast<double>(r.centroids.size());

  const std::vector<double> uniform(bins, 1.0 / static_cast<double>(bins));
  r.kl_vs_p = kl_divergence(r.histogram, bin_masses(density, 1.0, bins));
  r.kl_vs_p13 = kl_divergence(r.histogram, bin_masses(density, 1.0 / 3.0, bins));
  r.kl_vs_uniform = kl_divergence(r.histogram, uniform);
  return r;
}

std::vector<std::uint64_t> imbalance_resample(std::span<const std::uint32_t> labels,
                                              double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0)) throw ArgumentError("alpha must be >= 0");
  std::map<std::uint32_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  std::vector<std::uint32_t> classes;
  std::size_t largest = 0;
  for (const auto& [c, m] : members) {
    classes.push_back(c);
    largest = std::max(largest, m.size());
  }
  Rng rank_rng(seed, Stream::kSimulation, kImbalanceGenerator, 0);
  shuffle_prefix(std::span<std::uint32_t>(classes), classes.size(), rank_rng);

  std::vector<std::uint64_t> out;
  for (std::size_t r = 0; r < classes.size(); ++r) {
    auto& pool = members[classes[r]];
    const double scaled =
        static_cast<double>(largest) * std::pow(static_cast<double>(r + 1), -alpha);
    const auto target = std::min(
        pool.size(),
        std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(scaled + 1e-9))));
    Rng rng(seed, Stream::kSimulation, kImbalanceGenerator,
            static_cast<std::uint64_t>(classes[r]) + 1);
    shuffle_prefix(std::span<std::size_t>(pool), target, rng);
    out.insert(out.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(target));
  }
  std::sort(out.begin(), out.end());
  return out;
}

LabeledPool gen_power_law_pool(std::size_t num_classes, double alpha,
                               std::size_t num_points, std::size_t dim,
                               double spread, std::uint64_t seed) {
  if (num_classes == 0 || num_points < num_classes || dim == 0) {
    throw ArgumentError("pool needs classes >= 1, points >= classes, dim >= 1");
  }
  // Largest-remainder rounding of num_points * w_i / sum(w).
  std::vector<double> w(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    w[c] = std::pow(static_cast<double>(c + 1), -alpha);
  }
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<std::size_t> sizes(num_classes);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double exact = static_cast<double>(num_points) * w[c] / wsum;
    sizes[c] = std::max<std::size_t>(1, static_cast<std::size_t>(exact));
    assigned += sizes[c];
    remainders.emplace_back(-(exact - std::floor(exact)), c);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t i = 0; assigned < num_points; i = (i + 1) % num_classes) {
    ++sizes[remainders[i].second];
    ++assigned;
  }
  for (std::size_t c = num_classes; assigned > num_points && c-- > 0;) {
    while (sizes[c] > 1 && assigned > num_points) {
      --sizes[c];
      --assigned;
    }
  }

  Rng center_rng(seed, Stream::kSimulation, kPoolGenerator, 0);
  Matrix centers(num_classes, dim);
  for (float& v : centers.values()) {
    v = static_cast<float>(-spread + 2.0 * spread * center_rng.uniform());
  }
  Matrix points(num_points, dim);
  std::vector<std::uint32_t> labels(num_points);
  std::size_t row = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    Rng rng(seed, Stream::kSimulation, kPoolGenerator, c + 1);
    for (std::size_t i = 0; i < sizes[c]; ++i, ++row) {
      for (std::size_t a = 0; a < dim; ++a) {
        points(row, a) = static_cast<float>(centers(c, a) + rng.normal());
      }
      labels[row] = static_cast<std::uint32_t>(c);
    }
  }
  return {EmbeddingDataset(std::move(points)), std::move(labels)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit fit;
  fit.points = x.size();
  if (x.size() != y.size()) throw ArgumentError("fit_line: size mismatch");
  if (x.empty()) {
    fit.slope = fit.intercept = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    fit.intercept = my;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

BalanceStats balance_stats(const ClusterTree& tree, const EmbeddingDataset& data,
                           std::span<const std::uint32_t> labels, std::size_t knn) {
  if (knn == 0) throw ArgumentError("knn must be >= 1");
  if (labels.size() != data.size()) {
    throw ArgumentError("labels must cover every point");
  }
  if (tree.num_points != data.size() || tree.dim != data.dim()) {
    throw ArgumentError("tree does not describe this dataset");
  }
  const Matrix& centroids = tree.top().centroids;
  const std::size_t k = centroids.rows();
  const std::size_t neighbors = std::min(knn, data.size());

  BalanceStats stats;
  stats.cluster_label.resize(k);
  parallel_for_chunks(k, 8, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<std::pair<double, std::size_t>> keyed(data.size());
    for (std::size_t j = begin; j < end; ++j) {
      for (std::size_t i = 0; i < data.size(); ++i) {
        keyed[i] = {squared_distance(data.point(i), centroids.row(j)), i};
      }
      std::partial_sort(keyed.begin(),
                        keyed.begin() + static_cast<std::ptrdiff_t>(neighbors),
                        keyed.end());
      std::map<std::uint32_t, std::size_t> votes;
      for (std::size_t v = 0; v < neighbors; ++v) ++votes[labels[keyed[v].second]];
      std::uint32_t winner = 0;
      std::size_t best = 0;
      for (const auto& [label, count] : votes) {
        if (count > best) {
          best = count;
          winner = label;
        }
      }
      stats.cluster_label[j] = winner;
    }
  });

  const auto sizes = leaf_counts(tree).back();
  std::map<std::uint32_t, ClassBalance> by_class;
  for (std::uint32_t label : labels) {
    auto& cb = by_class[label];
    cb.class_id = label;
    ++cb.class_size;
  }
  std::map<std::uint32_t, std::size_t> leaf_total;
  for (std::size_t j = 0; j < k; ++j) {
    ++by_class[stats.cluster_label[j]].cluster_count;
    leaf_total[stats.cluster_label[j]] += sizes[j];
  }
  std::vector<double> xs, counts, mx, means;
  for (auto& [label, cb] : by_class) {
    cb.mean_cluster_size = cb.cluster_count > 0
                               ? static_cast<double>(leaf_total[label]) /
                                     static_cast<double>(cb.cluster_count)
                               : std::numeric_limits<double>::quiet_NaN();
    xs.push_back(static_cast<double>(cb.class_size));
    counts.push_back(static_cast<double>(cb.cluster_count));
    if (cb.has_clusters()) {
      mx.push_back(static_cast<double>(cb.class_size));
      means.push_back(cb.mean_cluster_size);
    }
    stats.classes.push_back(cb);
  }
  stats.count_fit = fit_line(xs, counts);
  stats.mean_size_fit = fit_line(mx, means);
  return stats;
}

}  // namespace hikm
