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

#include <fstream>
#include <sstream>

#include "cli.h"
#include "config.h"
#include "doctest.h"
#include "hikm/io.h"
#include "hikm/rng.h"
#include "json.hpp"
#include "manifest.h"
#include "oracles.h"

using namespace hikm;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

EmbeddingDataset small_data(std::size_t n) {
  Matrix m(n, 2);
  Rng r(17, 0);
  for (auto& v : m.values()) v = static_cast<float>(r.normal());
  return EmbeddingDataset(m);
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = cli::parse_cluster_config(nlohmann::json::parse(
      R"({"levels": 2, "k": [8, 3], "m": 2, "seed": 5, "init": "random"})"));
  CHECK(c.k == std::vector<std::size_t>{8, 3});
  CHECK(c.resample_steps == 2);
  CHECK(c.seed == 5);
  CHECK(c.init == InitMethod::kRandom);
  CHECK(cli::parse_cluster_config(cli::to_json(c)).k == c.k);
  CHECK_THROWS_AS(cli::parse_cluster_config(nlohmann::json::parse(R"({"k": [8], "kk": 1})")),
                  ArgumentError);
  CHECK_THROWS_AS(cli::parse_cluster_config(nlohmann::json::parse(R"({"levels": 3, "k": [8]})")),
                  ArgumentError);
  CHECK_THROWS_AS(cli::parse_cluster_config(nlohmann::json::parse(R"({"k": [3, 8]})")),
                  ArgumentError);
  CHECK_THROWS_AS(cli::parse_cluster_config(nlohmann::json::parse(R"({"k": "8"})")),
                  ArgumentError);
}

TEST_CASE("cluster and sample end to end") {
  const auto dir = oracle::temp_dir("cli_cluster");
  save_dataset(small_data(100), dir / "d.hkm");
  write_text(dir / "c.json", R"({"levels": 2, "k": [8, 3], "seed": 1})");

  const auto r = run({"cluster", "--config", (dir / "c.json").string(), "--data",
                      (dir / "d.hkm").string(), "--out", (dir / "t.json").string()});
  REQUIRE(r.code == 0);
  const auto tree = load_tree(dir / "t.json");
  CHECK(tree.level(1).num_clusters() == 8);
  CHECK(tree.level(2).num_clusters() == 3);
  REQUIRE(fs::exists(dir / "t.json.manifest.json"));
  const auto m = cli::read_manifest(dir / "t.json.manifest.json");
  CHECK(m.command == "cluster");
  CHECK(m.input_checksums.size() == 2);

  // Replay reproduces the tree bit for bit.
  const std::string before = slurp(dir / "t.json.level1.assign.u32");
  const std::string manifest_before = slurp(dir / "t.json");
  fs::remove(dir / "t.json.level1.assign.u32");
  CHECK(run({"replay", (dir / "t.json.manifest.json").string()}).code == 0);
  CHECK(slurp(dir / "t.json.level1.assign.u32") == before);
  CHECK(slurp(dir / "t.json") == manifest_before);

  // Saturating sample in both modes returns every index.
  for (std::string mode : {"flat", "hier"}) {
    const auto s = run({"sample", "--tree", (dir / "t.json").string(), "--data",
                        (dir / "d.hkm").string(), "--target", "100", "--mode", mode,
                        "--strategy", "c", "--out", (dir / ("all_" + mode + ".txt")).string()});
    REQUIRE(s.code == 0);
    CHECK(s.out.find("sampled 100 of requested 100") != std::string::npos);
    const auto idx = load_indices(dir / ("all_" + mode + ".txt"), IndexFormat::kText);
    CHECK(idx.size() == 100);
  }

  // Hierarchical random sampling with a fixed seed is reproducible.
  std::vector<std::string> args = {"sample", "--tree", (dir / "t.json").string(),
                                   "--data", (dir / "d.hkm").string(), "--target", "30",
                                   "--mode", "hier", "--strategy", "r", "--seed", "4",
                                   "--out", (dir / "a.bin").string(), "--binary"};
  REQUIRE(run(args).code == 0);
  args[args.size() - 2] = (dir / "b.bin").string();
  REQUIRE(run(args).code == 0);
  CHECK(slurp(dir / "a.bin") == slurp(dir / "b.bin"));
  CHECK(fs::file_size(dir / "a.bin") % 8 == 0);
}

TEST_CASE("cluster exit codes") {
  const auto dir = oracle::temp_dir("cli_codes");
  save_dataset(small_data(5), dir / "d.hkm");
  write_text(dir / "big.json", R"({"k": [8]})");
  write_text(dir / "bad.json", R"({"k": [2], "typo": 1})");
  write_text(dir / "ok.json", R"({"k": [2]})");
  write_text(dir / "junk.hkm", "not a dataset");

  auto r = run({"cluster", "--config", (dir / "big.json").string(), "--data",
                (dir / "d.hkm").string(), "--out", (dir / "t.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("k exceeds input size") != std::string::npos);
  CHECK(!fs::exists(dir / "t.json"));

  r = run({"cluster", "--config", (dir / "bad.json").string(), "--data",
           (dir / "d.hkm").string(), "--out", (dir / "t.json").string()});
  CHECK(r.code == 2);
  r = run({"cluster", "--config", (dir / "ok.json").string(), "--data",
           (dir / "junk.hkm").string(), "--out", (dir / "t.json").string()});
  CHECK(r.code == 3);
  r = run({"cluster", "--config", (dir / "ok.json").string()});
  CHECK(r.code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sample refuses a tree built over other data") {
  const auto dir = oracle::temp_dir("cli_mismatch");
  save_dataset(small_data(50), dir / "d.hkm");
  Matrix other = small_data(50).points();
  other(0, 0) += 1.0f;
  save_dataset(EmbeddingDataset(other), dir / "e.hkm");
  save_dataset(small_data(40), dir / "f.hkm");
  write_text(dir / "c.json", R"({"k": [4]})");
  REQUIRE(run({"cluster", "--config", (dir / "c.json").string(), "--data",
               (dir / "d.hkm").string(), "--out", (dir / "t.json").string()})
              .code == 0);
  for (const char* data : {"e.hkm", "f.hkm"}) {
    const auto r = run({"sample", "--tree", (dir / "t.json").string(), "--data",
                        (dir / data).string(), "--target", "10", "--out",
                        (dir / "s.txt").string()});
    CHECK(r.code == 4);
  }
  CHECK(!fs::exists(dir / "s.txt"));
  const auto r = run({"sample", "--tree", (dir / "t.json").string(), "--data",
                      (dir / "d.hkm").string(), "--target", "51", "--out",
                      (dir / "s.txt").string()});
  CHECK(r.code == 2);
  CHECK(run({"sample", "--tree", (dir / "t.json").string(), "--data",
             (dir / "d.hkm").string(), "--target", "5", "--mode", "diagonal", "--out",
             (dir / "s.txt").string()})
            .code == 2);
}

TEST_CASE("kl-check reports zero counterexamples") {
  const auto dir = oracle::temp_dir("cli_kl");
  const auto r = run({"kl-check", "--out", dir.string(), "--trials", "2000"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find(" 0 counterexamples") != std::string::npos);
  const std::string csv = slurp(dir / "kl_check.csv");
  CHECK(csv.rfind("t,trials,violations,worst_gap\n", 0) == 0);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(run({"kl-check", "--out", dir.string(), "--t", "1.5"}).code == 2);
}

TEST_CASE("zador writes one KL triple per exponent") {
  const auto dir = oracle::temp_dir("cli_zador");
  const auto r = run({"zador", "--out", dir.string(), "--s", "2,4", "--samples", "5000",
                      "--k", "16", "--svg"});
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "zador.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "s,kl_vs_p,kl_vs_p13,kl_vs_uniform");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 2);
  CHECK(fs::exists(dir / "zador.svg"));
  CHECK(slurp(dir / "zador.svg").rfind("<svg", 0) == 0);
  CHECK(run({"zador", "--out", dir.string(), "--s", "1"}).code == 2);
}

TEST_CASE("gen, imbalance and stats") {
  const auto dir = oracle::temp_dir("cli_stats");
  REQUIRE(run({"gen", "pool", "--out", (dir / "p.hkm").string(), "--labels",
               (dir / "p.labels").string(), "--classes", "4", "--points", "400"})
              .code == 0);
  const auto r = run({"imbalance", "--labels", (dir / "p.labels").string(), "--alpha", "0",
                      "--out", (dir / "keep.txt").string()});
  REQUIRE(r.code == 0);
  CHECK(load_indices(dir / "keep.txt", IndexFormat::kText).size() == 400);

  write_text(dir / "c.json", R"({"k": [12]})");
  REQUIRE(run({"cluster", "--config", (dir / "c.json").string(), "--data",
               (dir / "p.hkm").string(), "--out", (dir / "t.json").string()})
              .code == 0);
  const auto s = run({"stats", "--tree", (dir / "t.json").string(), "--data",
                      (dir / "p.hkm").string(), "--labels", (dir / "p.labels").string(),
                      "--out", (dir / "st").string(), "--svg"});
  REQUIRE(s.code == 0);
  std::istringstream csv(slurp(dir / "st" / "stats.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "class_id,class_size,cluster_count,mean_cluster_size");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 4);
  CHECK(fs::exists(dir / "st" / "fits.csv"));
  CHECK(fs::exists(dir / "st" / "stats.svg"));

  write_text(dir / "bad.labels", "0\n1\nx\n");
  CHECK(run({"stats", "--tree", (dir / "t.json").string(), "--data",
             (dir / "p.hkm").string(), "--labels", (dir / "bad.labels").string(),
             "--out", (dir / "st2").string()})
            .code == 3);
}

TEST_CASE("threads flag and environment fallback are accepted") {
  const auto dir = oracle::temp_dir("cli_threads");
  CHECK(run({"--threads", "3", "kl-check", "--out", dir.string(), "--trials", "10"}).code == 0);
  ::setenv("HIKM_THREADS", "2", 1);
  CHECK(run({"kl-check", "--out", dir.string(), "--trials", "10"}).code == 0);
  ::setenv("HIKM_THREADS", "lots", 1);
  CHECK(run({"kl-check", "--out", dir.string(), "--trials", "10"}).code == 2);
  ::unsetenv("HIKM_THREADS");
}
