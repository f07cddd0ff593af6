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

#include "hikm/density.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hikm/parallel.h"

namespace hikm {

double Box::volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < dim(); ++a) v *= hi[a] - lo[a];
  return v;
}

bool Box::contains(std::span<const float> x) const {
  for (std::size_t a = 0; a < dim(); ++a) {
    if (x[a] < lo[a] || x[a] > hi[a]) return false;
  }
  return true;
}

Box Box::square(double lo, double hi, std::size_t dim) {
  return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

double DensityGrid::cell_width(std::size_t axis) const {
  return (support.hi[axis] - support.lo[axis]) / static_cast<double>(resolution);
}

double DensityGrid::cell_volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < support.dim(); ++a) v *= cell_width(a);
  return v;
}

double DensityGrid::cell_center(std::size_t axis, std::size_t bin) const {
  return support.lo[axis] + (static_cast<double>(bin) + 0.5) * cell_width(axis);
}

std::size_t DensityGrid::index(std::span<const std::size_t> bins) const {
  std::size_t idx = 0;
  for (std::size_t b : bins) idx = idx * resolution + b;
  return idx;
}

std::vector<double> scott_bandwidth(const Matrix& points) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (n < 2) throw ArgumentError("Scott's rule needs at least two points");
  const double factor =
      std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
  std::vector<double> h(d);
  for (std::size_t a = 0; a < d; ++a) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += points(i, a);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = points(i, a) - mean;
      ss += diff * diff;
    }
    h[a] = std::sqrt(ss / static_cast<double>(n - 1)) * factor;
  }
  return h;
}

DensityGrid kde(const Matrix& points, std::span<const double> bandwidth,
                std::size_t resolution, const Box& support) {
  const std::size_t n = points.rows();
  const std::size_t d = support.dim();
  if (n == 0) throw ArgumentError("kde needs at least one point");
  if (points.cols() != d || bandwidth.size() != d) {
    throw ArgumentError("kde: dimension mismatch");
  }
  if (resolution == 0) throw ArgumentError("kde: resolution must be >= 1");
  for (double h : bandwidth) {
    if (!(h > 0.0)) throw ArgumentError("kde: bandwidth must be positive");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!support.contains(points.row(i))) {
      throw ArgumentError("kde: point " + std::to_string(i) +
                          " lies outside the support");
    }
  }

  DensityGrid grid;
  grid.support = support;
  grid.resolution = resolution;
  std::size_t cells = 1;
  for (std::size_t a = 0; a < d; ++a) cells *= resolution;
  grid.values.assign(cells, 0.0);

  // Per-axis kernel factors: factor[a][i * resolution + bin].
  std::vector<std::vector<double>> factor(d, std::vector<double>(n * resolution));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t b = 0; b < resolution; ++b) {
        const double z = (grid.cell_center(a, b) - points(i, a)) / bandwidth[a];
        factor[a][i * resolution + b] = std::exp(-0.5 * z * z);
      }
    }
  }
  parallel_for_chunks(cells, 256, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<std::size_t> bins(d);
    for (std::size_t cell = begin; cell < end; ++cell) {
      std::size_t rest = cell;
      for (std::size_t a = d; a-- > 0;) {
        bins[a] = rest % resolution;
        rest /= resolution;
      }
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double v = 1.0;
        for (std::size_t a = 0; a < d; ++a) v *= factor[a][i * resolution + bins[a]];
        acc += v;
      }
      grid.values[cell] = acc;
    }
  });
  const double mass = std::accumulate(grid.values.begin(), grid.values.end(), 0.0) *
                      grid.cell_volume();
  if (!(mass > 0.0)) {
    throw ArgumentError("kde: density vanishes on the grid (bandwidth too small)");
  }
  for (double& v : grid.values) v /= mass;
  return grid;
}

double kl_to_uniform(const DensityGrid& density) {
  const double u = 1.0 / density.support.volume();
  const double cell = density.cell_volume();
  double kl = 0.0;
  for (double p : density.values) {
    if (p <= 0.0) continue;
    kl += cell * p * std::log(std::max(p, kKlFloor) / u);
  }
  return std::max(0.0, kl);
}

DiscreteDist::DiscreteDist(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
  if (p_.empty()) throw ArgumentError("distribution needs a non-empty support");
  double total = 0.0;
  for (double v : p_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ArgumentError("distribution entries must be finite and > 0");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ArgumentError("distribution does not sum to one");
  }
}

DiscreteDist DiscreteDist::from_weights(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> p(weights.begin(), weights.end());
  for (double& v : p) v /= total;
  return DiscreteDist(std::move(p));
}

DiscreteDist DiscreteDist::uniform(std::size_t support) {
  return DiscreteDist(
      std::vector<double>(support, 1.0 / static_cast<double>(support)));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ArgumentError("kl: size mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (!(q[i] > 0.0)) throw ArgumentError("kl: reference has zero mass where p > 0");
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

}  // namespace hikm
