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

#include <algorithm>
#include <numeric>
#include <cmath>
#include <set>

#include "doctest.h"
#include "hikm/kmeans.h"
#include "hikm/parallel.h"
#include "oracles.h"

using namespace hikm;

namespace {

Matrix random_points(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
  Matrix m(n, d);
  Rng r(seed, 99);
  for (auto& v : m.values()) v = static_cast<float>(scale * r.normal());
  return m;
}

std::set<std::vector<float>> row_set(const Matrix& m) {
  std::set<std::vector<float>> s;
  for (std::size_t i = 0; i < m.rows(); ++i) s.insert({m.row(i).begin(), m.row(i).end()});
  return s;
}

// Brute-force nearest centroid with lowest-index ties.
std::uint32_t nearest(std::span<const float> x, const Matrix& c) {
  std::uint32_t best = 0;
  double bd = oracle::sq_dist(x, c.row(0));
  for (std::size_t j = 1; j < c.rows(); ++j) {
    const double d = oracle::sq_dist(x, c.row(j));
    if (d < bd) {
      bd = d;
      best = static_cast<std::uint32_t>(j);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("kmeans++ saturation and single centroid") {
  const Matrix data = random_points(12, 3, 1);
  Rng r(0, 0);
  const Matrix all = kmeanspp_init(data, 12, r);
  CHECK(row_set(all) == row_set(data));

  std::set<std::vector<float>> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rr(seed, 0);
    const Matrix one = kmeanspp_init(data, 1, rr);
    REQUIRE(one.rows() == 1);
    REQUIRE(row_set(data).count({one.row(0).begin(), one.row(0).end()}) == 1);
    seen.insert({one.row(0).begin(), one.row(0).end()});
  }
  CHECK(seen.size() == 12);  // every row is reachable as the first pick
}

TEST_CASE("kmeans++ with duplicate rows still returns distinct centroids") {
  Matrix data(6, 1, {1.f, 1.f, 1.f, 2.f, 2.f, 3.f});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng r(seed, 0);
    CHECK(row_set(kmeanspp_init(data, 3, r)).size() == 3);
  }
}

TEST_CASE("kmeans++ error paths") {
  const Matrix data = random_points(5, 2, 2);
  Rng r(0, 0);
  CHECK_THROWS_AS(kmeanspp_init(data, 6, r), ArgumentError);
  CHECK_THROWS_AS(kmeanspp_init(data, 0, r), ArgumentError);
  Matrix same(5, 2);
  CHECK_THROWS_AS(kmeanspp_init(same, 2, r), DegenerateInputError);
}

TEST_CASE("kmeans++ seeds both of two well-separated blobs") {
  Matrix data(200, 2);
  Rng g(11, 0);
  for (std::size_t i = 0; i < 200; ++i) {
    const double cx = i < 100 ? -50.0 : 50.0;
    data(i, 0) = static_cast<float>(cx + g.normal());
    data(i, 1) = static_cast<float>(g.normal());
  }
  int both = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Matrix c = kmeanspp_init(EmbeddingDataset(data), 2, seed);
    if ((c(0, 0) < 0) != (c(1, 0) < 0)) ++both;
  }
  CHECK(both >= 990);
}

TEST_CASE("assign: ties go to the lowest index") {
  Matrix c(3, 1, {-1.f, 5.f, 1.f});
  Matrix x(1, 1, {0.f});
  CHECK(assign(x, c)[0] == 0);
  Matrix data = random_points(20, 2, 4);
  const auto a = assign(data, data);
  for (std::size_t i = 0; i < 20; ++i) CHECK(a[i] == i);
  CHECK_THROWS_AS(assign(Matrix(2, 3), Matrix(1, 2)), ArgumentError);
}

TEST_CASE("assign: grid split by sign of x") {
  Matrix grid(0, 2);
  std::vector<float> v;
  for (int i = -5; i <= 5; ++i) {
    for (int j = -5; j <= 5; ++j) {
      if (i == 0) continue;
      v.push_back(0.3f * static_cast<float>(i));
      v.push_back(0.3f * static_cast<float>(j));
    }
  }
  grid = Matrix(v.size() / 2, 2, v);
  Matrix c(2, 2, {1.f, 0.f, -1.f, 0.f});
  const auto a = assign(grid, c);
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    CHECK(a[i] == nearest(grid.row(i), c));
    CHECK(a[i] == (grid(i, 0) > 0 ? 0u : 1u));
  }
}

TEST_CASE("distortion closed forms") {
  Matrix data(4, 1, {1.f, 2.f, 3.f, 6.f});
  Matrix mean(1, 1, {3.f});
  const std::vector<std::uint32_t> a(4, 0);
  CHECK(distortion(data, mean, a) == doctest::Approx(4 + 1 + 0 + 9));
  Matrix p(1, 2, {2.f, 0.f});
  Matrix c(1, 2, {0.f, 0.f});
  CHECK(distortion(p, c, std::vector<std::uint32_t>{0}, 4.0) == doctest::Approx(16.0));
  CHECK_THROWS_AS(distortion(p, c, std::vector<std::uint32_t>{1}), ArgumentError);
  CHECK_THROWS_AS(distortion(p, c, std::vector<std::uint32_t>{0}, 1.5), ArgumentError);
}

TEST_CASE("toy set: the {1, 2, 3} configuration costs about 16.7") {
  const Matrix toy = oracle::toy_set();
  Matrix c(3, 1, {1.f, 2.f, 3.f});
  CHECK(std::abs(distortion(toy, c, assign(toy, c)) - 16.7) <= 0.1);
}

TEST_CASE("lloyd closed forms") {
  const Matrix data = random_points(50, 3, 5);
  Matrix init(1, 3);
  const auto r = lloyd(data, init);
  double total = 0.0;
  std::vector<double> mean(3, 0.0);
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t a = 0; a < 3; ++a) mean[a] += data(i, a) / 50.0;
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t a = 0; a < 3; ++a) total += std::pow(data(i, a) - mean[a], 2);
  for (std::size_t a = 0; a < 3; ++a) CHECK(r.centroids(0, a) == doctest::Approx(mean[a]).epsilon(1e-5));
  CHECK(r.distortion == doctest::Approx(total).epsilon(1e-5));

  const auto full = lloyd(data, data);
  CHECK(full.distortion == 0.0);
  CHECK(full.centroids == data);
}

TEST_CASE("lloyd invariants on random data") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix data = random_points(600, 2, seed);
    KMeansOptions o;
    o.seed = seed;
    o.tol = 0.0;
    o.max_iters = 1000;
    const auto r = kmeans(data, 17, o);
    REQUIRE(r.converged);
    for (std::size_t i = 1; i < r.history.size(); ++i) {
      CHECK(r.history[i] <= r.history[i - 1]);
    }
    CHECK(assign(data, r.centroids) == r.assignment);
    // Distortion matches a direct recomputation.
    double direct = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i)
      direct += oracle::sq_dist(data.row(i), r.centroids.row(r.assignment[i]));
    CHECK(r.distortion == doctest::Approx(direct).epsilon(1e-5));
    // Centroids are member means and no cluster is empty.
    std::vector<std::vector<double>> sum(17, std::vector<double>(2, 0.0));
    std::vector<std::size_t> cnt(17, 0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      ++cnt[r.assignment[i]];
      for (std::size_t a = 0; a < 2; ++a) sum[r.assignment[i]][a] += data(i, a);
    }
    for (std::size_t j = 0; j < 17; ++j) {
      REQUIRE(cnt[j] > 0);
      for (std::size_t a = 0; a < 2; ++a) {
        const double m = sum[j][a] / static_cast<double>(cnt[j]);
        CHECK(std::abs(r.centroids(j, a) - m) <= 1e-5 * std::max(1.0, std::abs(m)));
      }
    }
  }
}

TEST_CASE("lloyd repairs empty clusters") {
  Matrix data(6, 1, {0.f, 0.1f, 0.2f, 10.f, 10.1f, 10.2f});
  // Centroid 2 starts far away from every point and would be empty.
  Matrix init(3, 1, {0.f, 10.f, 1000.f});
  const auto r = lloyd(data, init);
  std::vector<int> cnt(3, 0);
  for (auto a : r.assignment) ++cnt[a];
  for (int c : cnt) CHECK(c > 0);
}

TEST_CASE("kmeans is independent of the worker count") {
  const Matrix data = random_points(5000, 4, 8);
  KMeansOptions o;
  o.seed = 3;
  set_num_threads(1);
  const auto a = kmeans(data, 40, o);
  set_num_threads(8);
  const auto b = kmeans(data, 40, o);
  set_num_threads(1);
  CHECK(a.centroids == b.centroids);
  CHECK(a.assignment == b.assignment);
  CHECK(a.distortion == b.distortion);
  CHECK(a.history == b.history);
}

TEST_CASE("toy set: k-means++ median is no worse than random init") {
  const Matrix toy = oracle::toy_set();
  std::vector<double> pp, rnd;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    KMeansOptions o;
    o.seed = seed;
    pp.push_back(kmeans(toy, 3, o).distortion);
    o.init = InitMethod::kRandom;
    rnd.push_back(kmeans(toy, 3, o).distortion);
  }
  std::sort(pp.begin(), pp.end());
  std::sort(rnd.begin(), rnd.end());
  CHECK(pp[30] <= rnd[30]);
}

TEST_CASE("toy set: restarts reach the exact optimum") {
  const Matrix toy = oracle::toy_set();
  const double optimum = oracle::optimal_kmeans_1d(oracle::column(toy), 3);
  CHECK(optimum == doctest::Approx(5.168333).epsilon(1e-6));
  KMeansOptions o;
  o.restarts = 64;
  o.tol = 0.0;
  o.max_iters = 1000;
  const auto r = kmeans(toy, 3, o);
  CHECK(r.distortion < 16.7);
  CHECK(std::abs(r.distortion - optimum) <= 1e-6);
}

TEST_CASE("restart selection keeps the first restart when it is best") {
  const Matrix data = random_points(300, 2, 21);
  KMeansOptions o;
  o.seed = 4;
  const auto single = kmeans(data, 5, o);
  o.restarts = 4;
  const auto multi = kmeans(data, 5, o);
  CHECK(multi.distortion <= single.distortion);
}

TEST_CASE("power kmeans at s=2 reduces to lloyd") {
  const Matrix data = random_points(800, 1, 12);
  const auto p = power_kmeans(data, 10, 2.0, 5);
  KMeansOptions o;
  o.seed = 5;
  const auto l = kmeans(data, 10, o);
  CHECK(p.centroids == l.centroids);
  CHECK(p.assignment == l.assignment);
}

TEST_CASE("power centroid minimizes the s-power objective") {
  Matrix data(5, 1, {0.f, 0.f, 0.f, 0.f, 10.f});
  const std::vector<std::size_t> members = {0, 1, 2, 3, 4};
  auto objective = [&](double c, double s) {
    double f = 0.0;
    for (std::size_t i = 0; i < 5; ++i) f += std::pow(std::abs(data(i, 0) - c), s);
    return f;
  };
  for (double s : {4.0, 8.0}) {
    const auto c = power_centroid(data, members, s);
    // Grid search oracle over [0, 10].
    double best_c = 0.0, best_f = objective(0.0, s);
    for (int i = 1; i <= 100000; ++i) {
      const double x = 10.0 * i / 100000.0;
      if (objective(x, s) < best_f) {
        best_f = objective(x, s);
        best_c = x;
      }
    }
    CHECK(c[0] > 2.0);  // pulled toward the outlier, unlike the mean
    CHECK(objective(c[0], s) <= objective(2.0, s));
    CHECK(objective(c[0], s) == doctest::Approx(best_f).epsilon(1e-3));
    CHECK(c[0] == doctest::Approx(best_c).epsilon(1e-2));
  }
}

TEST_CASE("power kmeans objective is non-increasing") {
  const Matrix data = random_points(2000, 1, 13);
  for (double s : {4.0, 8.0}) {
    DescentOptions d;
    d.max_iters = 20;
    const auto r = power_kmeans(data, 8, s, 1, d);
    for (std::size_t i = 1; i < r.history.size(); ++i) {
      CHECK(r.history[i] <= r.history[i - 1] * (1 + 1e-9));
    }
    CHECK(r.objective == doctest::Approx(distortion(data, r.centroids, r.assignment, s)).epsilon(1e-6));
  }
}

TEST_CASE("1-D assignment agrees with brute force, including ties") {
  Rng r(31, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 9 + r.uniform_index(40);
    Matrix c(k, 1);
    // Coarse lattice values force duplicate centroids and exact midpoints.
    for (std::size_t j = 0; j < k; ++j) c(j, 0) = static_cast<float>(r.uniform_index(20)) * 0.5f;
    Matrix x(500, 1);
    for (std::size_t i = 0; i < 500; ++i) x(i, 0) = static_cast<float>(r.uniform_index(44)) * 0.25f - 0.5f;
    const auto a = assign(x, c);
    for (std::size_t i = 0; i < 500; ++i) REQUIRE(a[i] == nearest(x.row(i), c));
  }
}

TEST_CASE("1-D power centroid matches the general descent") {
  Rng r(5, 0);
  Matrix line(300, 1), plane(300, 2);
  for (std::size_t i = 0; i < 300; ++i) {
    const float v = static_cast<float>(std::exp(r.normal()));
    line(i, 0) = v;
    plane(i, 0) = v;
  }
  std::vector<std::size_t> members(300);
  std::iota(members.begin(), members.end(), 0);
  for (double s : {4.0, 6.0, 8.0}) {
    const auto a = power_centroid(line, members, s);
    const auto b = power_centroid(plane, members, s);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-9));
    CHECK(b[1] == 0.0);
  }
}
