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

#ifndef HIKM_TYPES_H_
#define HIKM_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hikm {

// Error hierarchy. Each family maps to a distinct CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied parameters (k > n, t outside (0,1), ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated file, wrong magic, unsupported version.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed file carrying unusable values (NaN/Inf).
class DataError : public Error {
 public:
  using Error::Error;
  DataError(const std::string& what, std::size_t row)
      : Error(what), row_(row) {}
  std::optional<std::size_t> row() const { return row_; }

 private:
  std::optional<std::size_t> row_;
};

// A structure violates its invariants (out-of-range assignment, empty
// cluster, broken partition).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input cannot support the request, e.g. fewer distinct points than k.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Dense row-major float matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<float> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  float operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  float& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }

  const std::vector<float>& values() const { return data_; }
  std::vector<float>& values() { return data_; }

  // Rows listed in `indices`, in that order.
  Matrix gather(std::span<const std::size_t> indices) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

// The raw pool: n points in d dimensions, all finite.
class EmbeddingDataset {
 public:
  EmbeddingDataset() = default;
  // Throws ArgumentError on an empty matrix and DataError on a non-finite
  // value.
  explicit EmbeddingDataset(Matrix points);

  std::size_t size() const { return points_.rows(); }
  std::size_t dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  std::span<const float> point(std::size_t i) const { return points_.row(i); }

  friend bool operator==(const EmbeddingDataset&,
                         const EmbeddingDataset&) = default;

 private:
  Matrix points_;
};

// One level of the hierarchy. `assignment` maps each input item of the
// level (data points at level 1, previous centroids above) to a centroid.
struct TreeLevel {
  Matrix centroids;
  std::vector<std::uint32_t> assignment;

  std::size_t num_clusters() const { return centroids.rows(); }
  std::size_t input_size() const { return assignment.size(); }

  friend bool operator==(const TreeLevel&, const TreeLevel&) = default;
};

struct ClusterTree {
  std::size_t num_points = 0;
  std::size_t dim = 0;
  std::vector<TreeLevel> levels;
  // FNV-1a of the dataset payload the tree was built from; 0 when unknown.
  std::uint64_t data_checksum = 0;

  std::size_t num_levels() const { return levels.size(); }
  const TreeLevel& level(std::size_t t) const { return levels.at(t - 1); }
  const TreeLevel& top() const { return levels.back(); }

  // Checks level chaining, assignment ranges, non-empty clusters and
  // k_1 >= k_2 >= ... >= k_T >= 1. Throws ValidationError.
  void validate() const;

  friend bool operator==(const ClusterTree&, const ClusterTree&) = default;
};

enum class InitMethod { kKMeansPlusPlus, kRandom };

struct ClusterConfig {
  std::vector<std::size_t> k;  // one entry per level, k[0] is level 1
  std::size_t resample_steps = 0;
  // Per-level points kept per cluster during resampling; empty means the
  // default of half the average cluster size, rounded up.
  std::vector<std::size_t> resample_counts;
  bool resample_first_level = false;
  InitMethod init = InitMethod::kKMeansPlusPlus;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  double tol = 1e-4;

  std::size_t num_levels() const { return k.size(); }
  bool resamples_level(std::size_t t) const {
    return resample_steps > 0 && (t > 1 || resample_first_level);
  }
  // Throws ArgumentError on schedule problems that do not depend on the
  // data (empty schedule, zero or increasing k, zero r).
  void validate() const;
};

enum class SampleMode { kFlat, kHierarchical };
enum class SampleStrategy { kRandom, kClosest, kFurthest };

struct SampleSpec {
  std::size_t target = 0;
  SampleMode mode = SampleMode::kHierarchical;
  SampleStrategy strategy = SampleStrategy::kRandom;
  std::uint64_t seed = 0;
};

std::string to_string(InitMethod m);
std::string to_string(SampleMode m);
std::string to_string(SampleStrategy s);
InitMethod parse_init_method(const std::string& s);
SampleMode parse_sample_mode(const std::string& s);
SampleStrategy parse_sample_strategy(const std::string& s);

}  // namespace hikm

#endif  // HIKM_TYPES_H_
