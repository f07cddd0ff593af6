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

#ifndef HIKM_DENSITY_H_
#define HIKM_DENSITY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "hikm/types.h"

namespace hikm {

// Axis-aligned box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  double volume() const;
  bool contains(std::span<const float> x) const;

  static Box square(double lo, double hi, std::size_t dim = 2);
};

// Density values at cell centers of a regular grid over `support`, stored
// row-major with axis 0 varying slowest. Values integrate to one:
// sum(values) * cell_volume() == 1.
struct DensityGrid {
  Box support;
  std::size_t resolution = 0;
  std::vector<double> values;

  double cell_volume() const;
  double cell_width(std::size_t axis) const;
  double cell_center(std::size_t axis, std::size_t bin) const;
  // Flat index of the cell with per-axis bins.
  std::size_t index(std::span<const std::size_t> bins) const;
};

// Scott's rule: per-axis sample std times n^(-1/(d+4)).
std::vector<double> scott_bandwidth(const Matrix& points);

// Isotropic-per-axis Gaussian KDE evaluated at the grid cell centers and
// renormalized over the support. Throws ArgumentError on zero points,
// points outside the support or non-positive bandwidth.
DensityGrid kde(const Matrix& points, std::span<const double> bandwidth,
                std::size_t resolution, const Box& support);

// KL(density || uniform on the support) as a cell sum, densities floored
// at kKlFloor before the log.
inline constexpr double kKlFloor = 1e-12;
double kl_to_uniform(const DensityGrid& density);

// Probability vector, strictly positive and summing to one within 1e-9.
class DiscreteDist {
 public:
  // Throws ArgumentError if the entries are not a valid distribution.
  explicit DiscreteDist(std::vector<double> probabilities);
  // Normalizes nonnegative weights (zeros are not allowed).
  static DiscreteDist from_weights(std::span<const double> weights);
  static DiscreteDist uniform(std::size_t support);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probabilities() const { return p_; }

 private:
  std::vector<double> p_;
};

// sum_i p_i log(p_i / q_i), skipping p_i == 0. q must be positive wherever
// p is.
double kl_divergence(std::span<const double> p, std::span<const double> q);

}  // namespace hikm

#endif  // HIKM_DENSITY_H_
