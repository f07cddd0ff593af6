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

#include "hikm/kmeans.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hikm/parallel.h"

namespace hikm {
namespace {

void check_dims(const Matrix& data, const Matrix& centroids) {
  if (data.cols() != centroids.cols()) {
    throw ArgumentError("dimension mismatch: data has " +
                        std::to_string(data.cols()) + ", centroids have " +
                        std::to_string(centroids.cols()));
  }
}

// Per-point nearest centroid and its squared distance.
void assign_into(const Matrix& data, const Matrix& centroids,
                 std::vector<std::uint32_t>& assignment,
                 std::vector<double>& dist2) {
  const std::size_t n = data.rows();
  const std::size_t k = centroids.rows();
  assignment.resize(n);
  dist2.resize(n);
  if (data.cols() == 1 && k > 8) {
    // 1-D: distances grow monotonically away from x along the sorted
    // centroids, so only a neighbourhood of x's insertion point can win. The
    // scan widens over exact ties to keep the lowest-index rule.
    std::vector<std::pair<float, std::uint32_t>> sorted(k);
    for (std::size_t j = 0; j < k; ++j) {
      sorted[j] = {centroids(j, 0), static_cast<std::uint32_t>(j)};
    }
    std::sort(sorted.begin(), sorted.end());
    parallel_for_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const float x = data(i, 0);
        auto dist = [&](std::size_t pos) {
          const double diff = static_cast<double>(x) - sorted[pos].first;
          return diff * diff;
        };
        const std::size_t right = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), x,
                             [](const auto& e, float v) { return e.first < v; }) -
            sorted.begin());
        double best = std::numeric_limits<double>::infinity();
        if (right < k) best = dist(right);
        if (right > 0) best = std::min(best, dist(right - 1));
        std::uint32_t best_j = std::numeric_limits<std::uint32_t>::max();
        for (std::size_t p = right; p < k && dist(p) == best; ++p) {
          best_j = std::min(best_j, sorted[p].second);
        }
        for (std::size_t p = right; p > 0 && dist(p - 1) == best; --p) {
          best_j = std::min(best_j, sorted[p - 1].second);
        }
        assignment[i] = best_j;
        dist2[i] = best;
      }
    });
    return;
  }
  parallel_for_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto x = data.row(i);
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t best_j = 0;
      for (std::size_t j = 0; j < k; ++j) {
        const double d = squared_distance(x, centroids.row(j));
        if (d < best) {
          best = d;
          best_j = static_cast<std::uint32_t>(j);
        }
      }
      assignment[i] = best_j;
      dist2[i] = best;
    }
  });
}

// Sum in fixed chunk order, independent of the worker count.
double ordered_sum(std::span<const double> values) {
  std::vector<double> partial(num_chunks(values.size()), 0.0);
  parallel_for_chunks(values.size(),
                      [&](std::size_t c, std::size_t begin, std::size_t end) {
                        double acc = 0.0;
                        for (std::size_t i = begin; i < end; ++i) acc += values[i];
                        partial[c] = acc;
                      });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// d2^(e) for the exponents used by the power distortion; integer exponents
// avoid std::pow.
inline double pow_dist2(double d2, double half_exponent) {
  if (half_exponent == 0.0) return 1.0;
  if (half_exponent == 1.0) return d2;
  const double rounded = std::round(half_exponent);
  if (rounded == half_exponent && rounded > 0 && rounded <= 16) {
    double r = d2;
    for (int e = 1; e < static_cast<int>(rounded); ++e) r *= d2;
    return r;
  }
  return std::pow(d2, half_exponent);
}

double power_sum(std::span<const double> dist2, double s) {
  if (s == 2.0) return ordered_sum(dist2);
  std::vector<double> powered(dist2.size());
  const double half = s / 2.0;
  for (std::size_t i = 0; i < dist2.size(); ++i) powered[i] = pow_dist2(dist2[i], half);
  return ordered_sum(powered);
}

// Moves the furthest point of a multi-member cluster into each empty
// cluster, then reassigns. Throws when the data cannot fill k clusters.
void repair_empty(const Matrix& data, Matrix& centroids,
                  std::vector<std::uint32_t>& assignment,
                  std::vector<double>& dist2) {
  const std::size_t k = centroids.rows();
  for (std::size_t round = 0; round <= k; ++round) {
    std::vector<std::size_t> counts(k, 0);
    for (std::uint32_t a : assignment) ++counts[a];
    bool any_empty = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      any_empty = true;
      std::size_t donor = assignment.size();
      double donor_d = 0.0;
      for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (counts[assignment[i]] > 1 && dist2[i] > donor_d) {
          donor_d = dist2[i];
          donor = i;
        }
      }
      if (donor == assignment.size()) {
        throw DegenerateInputError(
            "cannot repair empty cluster: fewer distinct points than k");
      }
      --counts[assignment[donor]];
      assignment[donor] = static_cast<std::uint32_t>(j);
      counts[j] = 1;
      dist2[donor] = 0.0;
      const auto src = data.row(donor);
      std::copy(src.begin(), src.end(), centroids.row(j).begin());
    }
    if (!any_empty) return;
    assign_into(data, centroids, assignment, dist2);
  }
  throw DegenerateInputError("empty-cluster repair did not settle");
}

Matrix cluster_means(const Matrix& data, std::span<const std::uint32_t> assignment,
                     std::size_t k) {
  const std::size_t d = data.cols();
  std::vector<double> sums(k * d, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const std::size_t j = assignment[i];
    const auto x = data.row(i);
    for (std::size_t a = 0; a < d; ++a) sums[j * d + a] += x[a];
    ++counts[j];
  }
  Matrix means(k, d);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t a = 0; a < d; ++a) {
      means(j, a) = static_cast<float>(sums[j * d + a] / static_cast<double>(counts[j]));
    }
  }
  return means;
}

void check_init(const Matrix& data, const Matrix& init) {
  check_dims(data, init);
  if (init.rows() == 0) throw ArgumentError("k must be >= 1");
  if (init.rows() > data.rows()) {
    throw ArgumentError("k exceeds input size (" + std::to_string(init.rows()) +
                        " > " + std::to_string(data.rows()) + ")");
  }
  for (float v : init.values()) {
    if (!std::isfinite(v)) throw ArgumentError("non-finite initial centroid");
  }
}

std::vector<std::vector<std::size_t>> members_of(
    std::span<const std::uint32_t> assignment, std::size_t k) {
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    members[assignment[i]].push_back(i);
  }
  return members;
}

}  // namespace

double squared_distance(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += diff * diff;
  }
  return acc;
}

Matrix kmeanspp_init(const Matrix& data, std::size_t k, Rng& rng) {
  const std::size_t n = data.rows();
  if (k == 0) throw ArgumentError("k must be >= 1");
  if (k > n) {
    throw ArgumentError("k exceeds input size (" + std::to_string(k) + " > " +
                        std::to_string(n) + ")");
  }
  Matrix centroids(k, data.cols());
  auto take = [&](std::size_t j, std::size_t i) {
    const auto src = data.row(i);
    std::copy(src.begin(), src.end(), centroids.row(j).begin());
  };
  take(0, rng.uniform_index(n));

  std::vector<double> d2(n);
  parallel_for_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      d2[i] = squared_distance(data.row(i), centroids.row(0));
    }
  });
  std::vector<double> partial(num_chunks(n));
  for (std::size_t j = 1; j < k; ++j) {
    parallel_for_chunks(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
      double acc = 0.0;
      for (std::size_t i = begin; i < end; ++i) acc += d2[i];
      partial[c] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    if (!(total > 0.0)) {
      throw DegenerateInputError("k-means++: fewer distinct points than k = " +
                                 std::to_string(k));
    }
    const double target = rng.uniform() * total;
    // Walk whole chunks first, then points inside the selected chunk.
    std::size_t chosen = n;
    std::size_t last_positive = n;
    double cum = 0.0;
    for (std::size_t c = 0; c < partial.size() && chosen == n; ++c) {
      const std::size_t begin = c * kChunkSize;
      const std::size_t end = std::min(n, begin + kChunkSize);
      if (cum + partial[c] <= target && c + 1 < partial.size()) {
        cum += partial[c];
        for (std::size_t i = end; i-- > begin;) {
          if (d2[i] > 0.0) {
            last_positive = i;
            break;
          }
        }
        continue;
      }
      for (std::size_t i = begin; i < end; ++i) {
        if (d2[i] <= 0.0) continue;
        last_positive = i;
        cum += d2[i];
        if (cum > target) {
          chosen = i;
          break;
        }
      }
    }
    // Rounding can leave target just past the final cumulative sum.
    if (chosen == n) chosen = last_positive;
    take(j, chosen);
    parallel_for_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        d2[i] = std::min(d2[i], squared_distance(data.row(i), centroids.row(j)));
      }
    });
  }
  return centroids;
}

Matrix kmeanspp_init(const EmbeddingDataset& data, std::size_t k,
                     std::uint64_t seed) {
  Rng rng(seed, KMeansOptions{}.stream);
  return kmeanspp_init(data.points(), k, rng);
}

Matrix random_init(const Matrix& data, std::size_t k, Rng& rng) {
  if (k == 0) throw ArgumentError("k must be >= 1");
  if (k > data.rows()) {
    throw ArgumentError("k exceeds input size (" + std::to_string(k) + " > " +
                        std::to_string(data.rows()) + ")");
  }
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle_prefix(std::span<std::size_t>(order), k, rng);
  return data.gather(std::span<const std::size_t>(order.data(), k));
}

std::vector<std::uint32_t> assign(const Matrix& data, const Matrix& centroids) {
  check_dims(data, centroids);
  if (centroids.rows() == 0) throw ArgumentError("no centroids");
  std::vector<std::uint32_t> assignment;
  std::vector<double> dist2;
  assign_into(data, centroids, assignment, dist2);
  return assignment;
}

std::vector<std::uint32_t> assign_nonempty(const Matrix& data, Matrix& centroids) {
  std::vector<std::uint32_t> assignment;
  std::vector<double> dist2;
  assign_into(data, centroids, assignment, dist2);
  repair_empty(data, centroids, assignment, dist2);
  return assignment;
}

double distortion(const Matrix& data, const Matrix& centroids,
                  std::span<const std::uint32_t> assignment, double s) {
  check_dims(data, centroids);
  if (!(s >= 2.0)) throw ArgumentError("distortion exponent must be >= 2");
  if (assignment.size() != data.rows()) {
    throw ArgumentError("assignment length does not match data");
  }
  std::vector<double> dist2(data.rows());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= centroids.rows()) {
      throw ArgumentError("assignment index out of range at item " +
                          std::to_string(i));
    }
  }
  parallel_for_chunks(data.rows(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      dist2[i] = squared_distance(data.row(i), centroids.row(assignment[i]));
    }
  });
  return power_sum(dist2, s);
}

KMeansResult lloyd(const Matrix& data, Matrix init_centroids,
                   const LloydOptions& options) {
  check_init(data, init_centroids);
  const std::size_t k = init_centroids.rows();
  KMeansResult r;
  r.centroids = std::move(init_centroids);
  std::vector<double> dist2;
  assign_into(data, r.centroids, r.assignment, dist2);
  repair_empty(data, r.centroids, r.assignment, dist2);
  double current = ordered_sum(dist2);
  r.history.push_back(current);

  std::vector<std::uint32_t> previous;
  while (r.iters_run < options.max_iters) {
    Matrix next = cluster_means(data, r.assignment, k);
    previous = r.assignment;
    assign_into(data, next, r.assignment, dist2);
    repair_empty(data, next, r.assignment, dist2);
    const double updated = ordered_sum(dist2);
    r.centroids = std::move(next);
    ++r.iters_run;
    r.history.push_back(updated);
    const bool stable = previous == r.assignment;
    const bool small_gain = (current - updated) <= options.tol * current;
    current = updated;
    if (stable || small_gain) {
      r.converged = true;
      break;
    }
  }
  r.distortion = current;
  r.objective = current;
  return r;
}

KMeansResult kmeans(const Matrix& data, std::size_t k,
                    const KMeansOptions& options) {
  if (options.restarts == 0) throw ArgumentError("restarts must be >= 1");
  KMeansResult best;
  for (std::size_t run = 0; run < options.restarts; ++run) {
    const std::uint64_t stream =
        run == 0 ? options.stream : options.stream ^ splitmix64(run);
    Rng rng(options.seed, stream);
    Matrix init = options.init == InitMethod::kKMeansPlusPlus
                      ? kmeanspp_init(data, k, rng)
                      : random_init(data, k, rng);
    KMeansResult r = lloyd(data, std::move(init), {options.max_iters, options.tol});
    if (run == 0 || r.distortion < best.distortion) best = std::move(r);
  }
  return best;
}

std::vector<double> power_centroid(const Matrix& data,
                                   std::span<const std::size_t> members,
                                   double s, const DescentOptions& options) {
  const std::size_t d = data.cols();
  const std::size_t m = members.size();
  const auto inv_m = 1.0 / static_cast<double>(m);
  // Contiguous copy of the member rows.
  std::vector<double> xs(m * d);
  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const auto x = data.row(members[r]);
    for (std::size_t a = 0; a < d; ++a) {
      xs[r * d + a] = x[a];
      mean[a] += x[a];
    }
  }
  for (double& v : mean) v *= inv_m;
  if (s == 2.0 || m == 1) return mean;

  const double half = s / 2.0;
  auto dist2_to = [&](std::size_t r, const std::vector<double>& c) {
    double acc = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double diff = xs[r * d + a] - c[a];
      acc += diff * diff;
    }
    return acc;
  };

  // In 1-D with an even integer exponent the objective is a polynomial in
  // the offset from the mean, so one pass over the members (central moments)
  // makes every later objective and gradient evaluation O(s).
  const bool polynomial = d == 1 && std::round(half) == half && s <= 32;
  std::vector<double> moments;  // moments[j] = mean of (x - mean)^j
  const auto order = static_cast<std::size_t>(s);
  if (polynomial) {
    moments.assign(order + 1, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const double y = xs[r] - mean[0];
      double p = 1.0;
      for (std::size_t j = 0; j <= order; ++j) {
        moments[j] += p;
        p *= y;
      }
    }
    for (double& v : moments) v *= inv_m;
  }
  // mean of (y - delta)^e over members, e <= s, via the binomial expansion.
  auto shifted_moment = [&](std::size_t e, double delta) {
    double powers[33];  // powers[i] = (-delta)^i
    powers[0] = 1.0;
    for (std::size_t i = 1; i <= e; ++i) powers[i] = powers[i - 1] * -delta;
    double acc = 0.0, coef = 1.0;  // coef = C(e, j)
    for (std::size_t j = 0; j <= e; ++j) {
      acc += coef * moments[j] * powers[e - j];
      coef = coef * static_cast<double>(e - j) / static_cast<double>(j + 1);
    }
    return acc;
  };

  auto objective = [&](const std::vector<double>& c) {
    if (polynomial) return shifted_moment(order, c[0] - mean[0]);
    double acc = 0.0;
    for (std::size_t r = 0; r < m; ++r) acc += pow_dist2(dist2_to(r, c), half);
    return acc * inv_m;
  };
  auto gradient = [&](const std::vector<double>& c, std::vector<double>& grad) {
    if (polynomial) {
      grad[0] = -s * shifted_moment(order - 1, c[0] - mean[0]);
      return;
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const double w = s * pow_dist2(dist2_to(r, c), half - 1.0);
      for (std::size_t a = 0; a < d; ++a) grad[a] += w * (c[a] - xs[r * d + a]);
    }
    for (double& g : grad) g *= inv_m;
  };

  // Scale: mean of ||x - mean||^(s-2), so that step * curvature ~ 0.1 (s-1).
  double scale = 0.0;
  if (polynomial) {
    scale = moments[order - 2];
  } else {
    for (std::size_t r = 0; r < m; ++r) scale += pow_dist2(dist2_to(r, mean), half - 1.0);
    scale *= inv_m;
  }
  if (!(scale > 0.0)) return mean;
  double step = options.step_scale / (s * scale);

  std::vector<double> c = mean;
  double f = objective(c);
  std::vector<double> grad(d), trial(d);
  for (std::size_t it = 0; it < options.steps; ++it) {
    gradient(c, grad);
    // Halve the step until the objective does not increase.
    bool accepted = false;
    double gain = 0.0;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      for (std::size_t a = 0; a < d; ++a) trial[a] = c[a] - step * grad[a];
      const double ft = objective(trial);
      if (ft <= f) {
        c.swap(trial);
        gain = f - ft;
        f = ft;
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted || gain <= 1e-13 * f) break;
  }
  return c;
}

KMeansResult power_kmeans(const Matrix& data, std::size_t k, double s,
                          std::uint64_t seed, const DescentOptions& options) {
  if (!(s >= 2.0)) throw ArgumentError("power exponent s must be >= 2");
  Rng rng(seed, KMeansOptions{}.stream);
  KMeansResult r;
  r.centroids = kmeanspp_init(data, k, rng);
  std::vector<double> dist2;
  assign_into(data, r.centroids, r.assignment, dist2);
  repair_empty(data, r.centroids, r.assignment, dist2);
  double current = power_sum(dist2, s);
  r.history.push_back(current);

  const std::size_t d = data.cols();
  std::vector<std::uint32_t> previous;
  while (r.iters_run < options.max_iters) {
    const auto members = members_of(r.assignment, k);
    Matrix next(k, d);
    parallel_for_chunks(k, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        const auto c = power_centroid(data, members[j], s, options);
        for (std::size_t a = 0; a < d; ++a) next(j, a) = static_cast<float>(c[a]);
      }
    });
    previous = r.assignment;
    assign_into(data, next, r.assignment, dist2);
    repair_empty(data, next, r.assignment, dist2);
    const double updated = power_sum(dist2, s);
    r.centroids = std::move(next);
    ++r.iters_run;
    r.history.push_back(updated);
    if (updated > current * (1.0 + options.tol)) {
      // Descent made things worse beyond tolerance; report and stop.
      current = updated;
      r.converged = false;
      break;
    }
    const bool stable = previous == r.assignment;
    const bool small_gain = (current - updated) <= options.tol * current;
    current = updated;
    if (stable || small_gain) {
      r.converged = true;
      break;
    }
  }
  r.objective = current;
  r.distortion = s == 2.0 ? current : ordered_sum(dist2);
  return r;
}

}  // namespace hikm
