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

#include "hikm/types.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace hikm {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ArgumentError("matrix payload has " + std::to_string(data_.size()) +
                        " values, expected " +
                        std::to_string(rows_ * cols_));
  }
}

Matrix Matrix::gather(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

EmbeddingDataset::EmbeddingDataset(Matrix points) : points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0) {
    throw ArgumentError("dataset must have n >= 1 and d >= 1");
  }
  for (std::size_t i = 0; i < points_.rows(); ++i) {
    for (float v : points_.row(i)) {
      if (!std::isfinite(v)) {
        throw DataError("non-finite value in row " + std::to_string(i), i);
      }
    }
  }
}

void ClusterTree::validate() const {
  if (num_points == 0 || dim == 0) {
    throw ValidationError("tree must cover n >= 1 points of dimension >= 1");
  }
  if (levels.empty()) throw ValidationError("tree has no levels");
  std::size_t expected_input = num_points;
  std::size_t prev_k = num_points;
  for (std::size_t t = 0; t < levels.size(); ++t) {
    const TreeLevel& lv = levels[t];
    const std::string where = "level " + std::to_string(t + 1) + ": ";
    const std::size_t k = lv.num_clusters();
    if (k == 0) throw ValidationError(where + "no centroids");
    if (k > prev_k) {
      throw ValidationError(where + "cluster count increases across levels");
    }
    if (lv.centroids.cols() != dim) {
      throw ValidationError(where + "centroid dimension mismatch");
    }
    if (lv.input_size() != expected_input) {
      throw ValidationError(where + "assignment covers " +
                            std::to_string(lv.input_size()) +
                            " items, expected " +
                            std::to_string(expected_input));
    }
    std::vector<std::size_t> members(k, 0);
    for (std::size_t i = 0; i < lv.assignment.size(); ++i) {
      const std::uint32_t a = lv.assignment[i];
      if (a >= k) {
        throw ValidationError(where + "assignment of item " +
                              std::to_string(i) + " out of range");
      }
      ++members[a];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (members[j] == 0) {
        throw ValidationError(where + "cluster " + std::to_string(j) +
                              " is empty");
      }
    }
    for (float v : lv.centroids.values()) {
      if (!std::isfinite(v)) throw ValidationError(where + "non-finite centroid");
    }
    expected_input = k;
    prev_k = k;
  }
}

void ClusterConfig::validate() const {
  if (k.empty()) throw ArgumentError("config needs at least one level");
  for (std::size_t t = 0; t < k.size(); ++t) {
    if (k[t] == 0) throw ArgumentError("k must be >= 1 at every level");
    if (t > 0 && k[t] > k[t - 1]) {
      throw ArgumentError("k must be non-increasing across levels");
    }
  }
  if (!resample_counts.empty()) {
    if (resample_counts.size() != k.size()) {
      throw ArgumentError("r must list one count per level");
    }
    for (std::size_t t = 0; t < k.size(); ++t) {
      if (resamples_level(t + 1) && resample_counts[t] == 0) {
        throw ArgumentError("r must be >= 1 on resampled levels");
      }
    }
  }
  if (max_iters == 0) throw ArgumentError("max_iters must be >= 1");
  if (!(tol >= 0.0)) throw ArgumentError("tol must be >= 0");
}

std::string to_string(InitMethod m) {
  return m == InitMethod::kKMeansPlusPlus ? "kmeanspp" : "random";
}

std::string to_string(SampleMode m) {
  return m == SampleMode::kFlat ? "flat" : "hier";
}

std::string to_string(SampleStrategy s) {
  switch (s) {
    case SampleStrategy::kRandom:
      return "r";
    case SampleStrategy::kClosest:
      return "c";
    case SampleStrategy::kFurthest:
      return "f";
  }
  return "?";
}

InitMethod parse_init_method(const std::string& s) {
  if (s == "kmeanspp" || s == "kmeans++") return InitMethod::kKMeansPlusPlus;
  if (s == "random") return InitMethod::kRandom;
  throw ArgumentError("unknown init method '" + s + "'");
}

SampleMode parse_sample_mode(const std::string& s) {
  if (s == "flat") return SampleMode::kFlat;
  if (s == "hier" || s == "hierarchical") return SampleMode::kHierarchical;
  throw ArgumentError("unknown sampling mode '" + s + "'");
}

SampleStrategy parse_sample_strategy(const std::string& s) {
  if (s == "r") return SampleStrategy::kRandom;
  if (s == "c") return SampleStrategy::kClosest;
  if (s == "f") return SampleStrategy::kFurthest;
  throw ArgumentError("unknown sampling strategy '" + s + "'");
}

}  // namespace hikm
