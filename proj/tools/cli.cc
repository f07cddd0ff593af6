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

#include "cli.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.h"
#include "hikm/evalsim.h"
#include "hikm/hierarchy.h"
#include "hikm/io.h"
#include "hikm/parallel.h"
#include "hikm/sampling.h"
#include "manifest.h"
#include "svg.h"

namespace hikm::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class MismatchError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::size_t threads = 0;
  bool svg = false;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

void resolve_threads(std::size_t flag) {
  std::size_t n = flag;
  if (n == 0) {
    if (const char* env = std::getenv("HIKM_THREADS")) {
      try {
        n = std::stoul(env);
      } catch (const std::exception&) {
        throw ArgumentError("HIKM_THREADS must be a positive integer");
      }
    }
  }
  if (n > 0) set_num_threads(n);
}

fs::path manifest_path_for_file(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

std::vector<std::uint32_t> load_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open labels " + path.string());
  std::vector<std::uint32_t> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(line, &used);
      if (used != line.size() || v > 0xffffffffUL) throw std::invalid_argument(line);
      labels.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw FormatError(path.string() + ": bad label line '" + line + "'");
    }
  }
  return labels;
}

void save_labels(std::span<const std::uint32_t> labels, const fs::path& path) {
  std::string text;
  for (std::uint32_t l : labels) text += std::to_string(l) + "\n";
  write_file_atomic(path, text);
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------

struct ClusterArgs {
  std::string config, data, out;
  std::optional<std::uint64_t> seed;
};

int cmd_cluster(const ClusterArgs& a, const std::vector<std::string>& argv,
                std::ostream& out, std::ostream& err) {
  Timer timer;
  ClusterConfig config;
  try {
    config = load_cluster_config(a.config);
  } catch (const ArgumentError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (a.seed) config.seed = *a.seed;
  EmbeddingDataset data;
  try {
    data = load_dataset(a.data);
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
  if (config.k.front() > data.size()) {
    err << "config error: k exceeds input size (k_1 = " << config.k.front()
        << ", n = " << data.size() << ")\n";
    return kExitUsage;
  }
  const ClusterTree tree = build_hierarchy(data, config);
  save_tree(tree, a.out);

  RunManifest m;
  m.command = "cluster";
  m.args = argv;
  m.config = to_json(config);
  m.seed = config.seed;
  m.input_checksums[a.config] = file_checksum(a.config);
  m.input_checksums[a.data] = file_checksum(a.data);
  m.outputs.push_back(a.out);
  for (std::size_t t = 1; t <= tree.num_levels(); ++t) {
    const std::string base = a.out + ".level" + std::to_string(t);
    m.outputs.push_back(base + ".centroids.f32");
    m.outputs.push_back(base + ".assign.u32");
  }
  m.wall_time_s = timer.seconds();
  write_manifest(m, manifest_path_for_file(a.out));

  out << "built " << tree.num_levels() << "-level tree over " << data.size()
      << " points; clusters per level:";
  for (const auto& lv : tree.levels) out << " " << lv.num_clusters();
  out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string tree, data, out;
  std::size_t target = 0;
  std::string mode = "hier";
  std::string strategy = "r";
  std::uint64_t seed = 0;
  bool binary = false;
};

int cmd_sample(const SampleArgs& a, const std::vector<std::string>& argv,
               std::ostream& out, std::ostream& err) {
  Timer timer;
  SampleSpec spec;
  spec.target = a.target;
  spec.mode = parse_sample_mode(a.mode);
  spec.strategy = parse_sample_strategy(a.strategy);
  spec.seed = a.seed;

  ClusterTree tree;
  EmbeddingDataset data;
  try {
    tree = load_tree(a.tree);
    data = load_dataset(a.data);
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
  if (tree.num_points != data.size() || tree.dim != data.dim() ||
      (tree.data_checksum != 0 && tree.data_checksum != dataset_checksum(data))) {
    err << "mismatch: tree was built over a different dataset ("
        << tree.num_points << "x" << tree.dim << ", checksum "
        << hex64(tree.data_checksum) << ")\n";
    return kExitMismatch;
  }
  if (spec.target > data.size()) {
    err << "argument error: target " << spec.target << " exceeds dataset size "
        << data.size() << "\n";
    return kExitUsage;
  }
  const auto indices = sample(tree, data, spec);
  save_indices(indices, a.out, a.binary ? IndexFormat::kBinary : IndexFormat::kText);

  RunManifest m;
  m.command = "sample";
  m.args = argv;
  m.config = {{"target", spec.target},
              {"mode", to_string(spec.mode)},
              {"strategy", to_string(spec.strategy)},
              {"format", a.binary ? "binary-u64" : "text"}};
  m.seed = spec.seed;
  m.input_checksums[a.tree] = file_checksum(a.tree);
  m.input_checksums[a.data] = file_checksum(a.data);
  m.outputs.push_back(a.out);
  m.wall_time_s = timer.seconds();
  write_manifest(m, manifest_path_for_file(a.out));

  out << "sampled " << indices.size() << " of requested " << spec.target
      << " points (" << to_string(spec.mode) << ", " << to_string(spec.strategy)
      << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  double bandwidth = 0.0;
  std::size_t resolution = 100;
  std::string dataset_out;
};

int cmd_simulate(const SimulateArgs& a, const Common& c,
                 const std::vector<std::string>& argv, std::ostream& out) {
  Timer timer;
  ensure_dir(a.out);
  SimulationOptions options;
  options.bandwidth = a.bandwidth;
  options.resolution = a.resolution;
  if (a.seeds == 0) throw ArgumentError("--seeds must be >= 1");

  std::string csv = "config_name,seed,kl_to_uniform\n";
  RunManifest m;
  m.command = "simulate";
  m.args = argv;
  m.seed = a.seed;
  for (std::size_t s = 0; s < a.seeds; ++s) {
    const std::uint64_t seed = a.seed + s;
    const auto rows = run_simulation(seed, options);
    std::vector<std::string> panels;
    for (const auto& row : rows) {
      csv += row.config + "," + std::to_string(seed) + "," + fmt(row.kl_to_uniform) + "\n";
      out << "seed " << seed << "  " << row.config << "  KL = " << fmt(row.kl_to_uniform)
          << "\n";
      if (c.svg) {
        ScatterSeries series;
        for (std::size_t i = 0; i < row.centroids.rows(); ++i) {
          series.x.push_back(row.centroids(i, 0));
          series.y.push_back(row.centroids(i, 1));
        }
        PlotFrame frame;
        frame.title = row.config + " (KL " + fmt(row.kl_to_uniform).substr(0, 6) + ")";
        const double hw = options.mixture.half_width;
        frame.x_range = frame.y_range = std::make_pair(-hw, hw);
        panels.push_back(scatter_svg({series}, frame));
      }
    }
    if (c.svg) {
      const fs::path svg_path = fs::path(a.out) / ("simulate_seed" + std::to_string(seed) + ".svg");
      write_file_atomic(svg_path, panels_svg(panels, 420, 420));
      m.outputs.push_back(svg_path.string());
    }
  }
  const double hw = options.mixture.half_width;
  m.config = {{"configs", json::array()},
              {"seeds", a.seeds},
              {"bandwidth", options.bandwidth > 0.0
                                ? options.bandwidth
                                : default_simulation_bandwidth(
                                      options.configs.front().k.back(), hw)},
              {"resolution", options.resolution}};
  for (const auto& sc : options.configs) {
    m.config["configs"].push_back({{"name", sc.name}, {"k", sc.k}, {"m", sc.resample_steps}});
  }
  const fs::path csv_path = fs::path(a.out) / "simulate.csv";
  write_file_atomic(csv_path, csv);
  m.outputs.push_back(csv_path.string());
  if (!a.dataset_out.empty()) {
    save_dataset(gen_mixture_2d(a.seed, options.mixture), a.dataset_out);
    m.outputs.push_back(a.dataset_out);
  }
  m.wall_time_s = timer.seconds();
  write_manifest(m, fs::path(a.out) / "manifest.json");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ZadorArgs {
  std::string out;
  std::vector<double> s = {2.0, 4.0, 8.0};
  std::string density = "normal";
  std::size_t samples = 100000;
  std::size_t k = 64;
  std::uint64_t seed = 0;
  std::size_t bins = kZadorBins;
};

Density1D parse_density(const std::string& name) {
  if (name == "normal") return Density1D::truncated_normal();
  if (name == "bimodal") return Density1D::bimodal();
  if (name == "exponential") return Density1D::exponential();
  if (name == "uniform") return Density1D::uniform();
  throw ArgumentError("unknown density '" + name + "'");
}

int cmd_zador(const ZadorArgs& a, const Common& c,
              const std::vector<std::string>& argv, std::ostream& out) {
  Timer timer;
  const Density1D density = parse_density(a.density);
  for (double s : a.s) {
    if (!(s >= 2.0)) throw ArgumentError("every s must be >= 2");
  }
  ensure_dir(a.out);
  std::string csv = "s,kl_vs_p,kl_vs_p13,kl_vs_uniform\n";
  std::string centroid_csv = "s,centroid\n";
  std::vector<std::string> panels;
  for (double s : a.s) {
    const ZadorResult r = zador_experiment_1d(density, a.samples, a.k, s, a.seed, a.bins);
    csv += fmt(s) + "," + fmt(r.kl_vs_p) + "," + fmt(r.kl_vs_p13) + "," +
           fmt(r.kl_vs_uniform) + "\n";
    for (double x : r.centroids) centroid_csv += fmt(s) + "," + fmt(x) + "\n";
    out << "s = " << fmt(s) << "  KL(hist||p) = " << fmt(r.kl_vs_p)
        << "  KL(hist||p^1/3) = " << fmt(r.kl_vs_p13)
        << "  KL(hist||U) = " << fmt(r.kl_vs_uniform)
        << (r.converged ? "" : "  (iteration cap reached)") << "\n";
    if (c.svg) {
      ScatterSeries hist;
      const double width = (density.hi - density.lo) / static_cast<double>(a.bins);
      for (std::size_t b = 0; b < a.bins; ++b) {
        hist.x.push_back(density.lo + (static_cast<double>(b) + 0.5) * width);
        hist.y.push_back(r.histogram[b]);
      }
      ScatterSeries p13 = hist;
      p13.y = bin_masses(density, 1.0 / 3.0, a.bins);
      p13.color = "#d62728";
      PlotFrame frame;
      frame.title = "s = " + fmt(s) + " (blue: centroids, red: p^1/3)";
      frame.x_label = "x";
      frame.y_label = "bin mass";
      panels.push_back(scatter_svg({hist, p13}, frame));
    }
  }
  RunManifest m;
  m.command = "zador";
  m.args = argv;
  m.seed = a.seed;
  m.config = {{"density", density.name()}, {"samples", a.samples}, {"k", a.k},
              {"s", a.s}, {"bins", a.bins}};
  const fs::path csv_path = fs::path(a.out) / "zador.csv";
  const fs::path cpath = fs::path(a.out) / "zador_centroids.csv";
  write_file_atomic(csv_path, csv);
  write_file_atomic(cpath, centroid_csv);
  m.outputs = {csv_path.string(), cpath.string()};
  if (c.svg) {
    const fs::path svg_path = fs::path(a.out) / "zador.svg";
    write_file_atomic(svg_path, panels_svg(panels, 420, 420));
    m.outputs.push_back(svg_path.string());
  }
  m.wall_time_s = timer.seconds();
  write_manifest(m, fs::path(a.out) / "manifest.json");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct KlCheckArgs {
  std::string out;
  std::size_t trials = 10000;
  std::size_t max_support = 32;
  std::vector<double> t = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::uint64_t seed = 0;
};

int cmd_kl_check(const KlCheckArgs& a, const std::vector<std::string>& argv,
                 std::ostream& out) {
  Timer timer;
  for (double t : a.t) {
    if (!(t > 0.0 && t < 1.0)) throw ArgumentError("every t must lie in (0, 1)");
  }
  ensure_dir(a.out);
  const auto sweeps = lemma1_sweep(a.trials, a.t, a.max_support, a.seed);
  std::string csv = "t,trials,violations,worst_gap\n";
  std::size_t total = 0;
  for (const auto& s : sweeps) {
    csv += fmt(s.t) + "," + std::to_string(s.trials) + "," +
           std::to_string(s.violations) + "," + fmt(s.worst_gap) + "\n";
    total += s.violations;
  }
  const Lemma1Result uniform = lemma1_check(DiscreteDist::uniform(a.max_support), 0.5);
  out << "checked " << a.trials * a.t.size() << " (distribution, t) pairs: "
      << total << " counterexamples\n";
  out << "uniform distribution: KL(Q||U) = " << fmt(uniform.kl_q_u)
      << ", KL(P||U) = " << fmt(uniform.kl_p_u) << "\n";

  RunManifest m;
  m.command = "kl-check";
  m.args = argv;
  m.seed = a.seed;
  m.config = {{"trials", a.trials}, {"max_support", a.max_support}, {"t", a.t}};
  const fs::path csv_path = fs::path(a.out) / "kl_check.csv";
  write_file_atomic(csv_path, csv);
  m.outputs = {csv_path.string()};
  m.wall_time_s = timer.seconds();
  write_manifest(m, fs::path(a.out) / "manifest.json");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string tree, data, labels, out;
  std::size_t knn = kDefaultKnn;
};

int cmd_stats(const StatsArgs& a, const Common& c,
              const std::vector<std::string>& argv, std::ostream& out,
              std::ostream& err) {
  Timer timer;
  ClusterTree tree;
  EmbeddingDataset data;
  std::vector<std::uint32_t> labels;
  try {
    tree = load_tree(a.tree);
    data = load_dataset(a.data);
    labels = load_labels(a.labels);
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
  if (tree.num_points != data.size() || tree.dim != data.dim() ||
      labels.size() != data.size()) {
    err << "mismatch: tree, dataset and labels disagree on the point count\n";
    return kExitMismatch;
  }
  ensure_dir(a.out);
  const BalanceStats stats = balance_stats(tree, data, labels, a.knn);
  std::string csv = "class_id,class_size,cluster_count,mean_cluster_size\n";
  for (const auto& cb : stats.classes) {
    csv += std::to_string(cb.class_id) + "," + std::to_string(cb.class_size) + "," +
           std::to_string(cb.cluster_count) + "," + fmt(cb.mean_cluster_size) + "\n";
  }
  std::string fits = "count_slope,count_intercept,mean_size_slope,mean_size_intercept\n";
  fits += fmt(stats.count_fit.slope) + "," + fmt(stats.count_fit.intercept) + "," +
          fmt(stats.mean_size_fit.slope) + "," + fmt(stats.mean_size_fit.intercept) + "\n";
  const fs::path csv_path = fs::path(a.out) / "stats.csv";
  const fs::path fits_path = fs::path(a.out) / "fits.csv";
  write_file_atomic(csv_path, csv);
  write_file_atomic(fits_path, fits);
  out << "cluster-count slope " << fmt(stats.count_fit.slope)
      << ", mean-cluster-size slope " << fmt(stats.mean_size_fit.slope) << "\n";

  RunManifest m;
  m.command = "stats";
  m.args = argv;
  m.config = {{"knn", a.knn}};
  m.input_checksums[a.tree] = file_checksum(a.tree);
  m.input_checksums[a.data] = file_checksum(a.data);
  m.input_checksums[a.labels] = file_checksum(a.labels);
  m.outputs = {csv_path.string(), fits_path.string()};
  if (c.svg) {
    ScatterSeries counts, means;
    for (const auto& cb : stats.classes) {
      counts.x.push_back(static_cast<double>(cb.class_size));
      counts.y.push_back(static_cast<double>(cb.cluster_count));
      means.x.push_back(static_cast<double>(cb.class_size));
      means.y.push_back(cb.mean_cluster_size);
    }
    counts.line = std::make_pair(stats.count_fit.slope, stats.count_fit.intercept);
    means.line = std::make_pair(stats.mean_size_fit.slope, stats.mean_size_fit.intercept);
    PlotFrame f1, f2;
    f1.title = "clusters per class";
    f1.x_label = f2.x_label = "class size";
    f1.y_label = "cluster count";
    f2.title = "mean cluster size per class";
    f2.y_label = "mean cluster size";
    const fs::path svg_path = fs::path(a.out) / "stats.svg";
    write_file_atomic(svg_path, panels_svg({scatter_svg({counts}, f1),
                                            scatter_svg({means}, f2)},
                                           420, 420));
    m.outputs.push_back(svg_path.string());
  }
  m.wall_time_s = timer.seconds();
  write_manifest(m, fs::path(a.out) / "manifest.json");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind = "mixture";
  std::string out, labels;
  std::uint64_t seed = 0;
  std::size_t classes = 20;
  double alpha = 1.0;
  std::size_t points = 20000;
  std::size_t dim = 2;
  double spread = 20.0;
};

int cmd_gen(const GenArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  Timer timer;
  RunManifest m;
  m.command = "gen";
  m.args = argv;
  m.seed = a.seed;
  if (a.kind == "mixture") {
    save_dataset(gen_mixture_2d(a.seed), a.out);
    m.config = {{"kind", "mixture"}};
    m.outputs = {a.out};
    out << "wrote 9000x2 mixture to " << a.out << "\n";
  } else if (a.kind == "pool") {
    if (a.labels.empty()) throw ArgumentError("gen pool needs --labels");
    const LabeledPool pool =
        gen_power_law_pool(a.classes, a.alpha, a.points, a.dim, a.spread, a.seed);
    save_dataset(pool.data, a.out);
    save_labels(pool.labels, a.labels);
    m.config = {{"kind", "pool"}, {"classes", a.classes}, {"alpha", a.alpha},
                {"points", a.points}, {"dim", a.dim}, {"spread", a.spread}};
    m.outputs = {a.out, a.labels};
    out << "wrote " << a.points << "x" << a.dim << " pool with " << a.classes
        << " classes to " << a.out << "\n";
  } else {
    throw ArgumentError("gen kind must be 'mixture' or 'pool'");
  }
  m.wall_time_s = timer.seconds();
  write_manifest(m, manifest_path_for_file(a.out));
  return kExitOk;
}

struct ImbalanceArgs {
  std::string labels, out;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  bool binary = false;
};

int cmd_imbalance(const ImbalanceArgs& a, const std::vector<std::string>& argv,
                  std::ostream& out, std::ostream& err) {
  Timer timer;
  std::vector<std::uint32_t> labels;
  try {
    labels = load_labels(a.labels);
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
  const auto subset = imbalance_resample(labels, a.alpha, a.seed);
  save_indices(subset, a.out, a.binary ? IndexFormat::kBinary : IndexFormat::kText);
  RunManifest m;
  m.command = "imbalance";
  m.args = argv;
  m.seed = a.seed;
  m.config = {{"alpha", a.alpha}};
  m.input_checksums[a.labels] = file_checksum(a.labels);
  m.outputs = {a.out};
  m.wall_time_s = timer.seconds();
  write_manifest(m, manifest_path_for_file(a.out));
  out << "kept " << subset.size() << " of " << labels.size() << " points\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical k-means data curation"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads,
                 "Worker threads (default: HIKM_THREADS or all cores); never changes results");
  app.add_flag("--svg", common.svg, "Also emit SVG figures");

  ClusterArgs cluster;
  auto* c_cmd = app.add_subcommand("cluster", "Build a hierarchical k-means tree");
  c_cmd->add_option("--config", cluster.config, "Cluster config (JSON)")->required();
  c_cmd->add_option("--data", cluster.data, "Embedding file (HKM1)")->required();
  c_cmd->add_option("--out", cluster.out, "Tree manifest path")->required();
  c_cmd->add_option("--seed", cluster.seed, "Override the config seed");

  SampleArgs samp;
  auto* s_cmd = app.add_subcommand("sample", "Draw a balanced subset from a tree");
  s_cmd->add_option("--tree", samp.tree)->required();
  s_cmd->add_option("--data", samp.data)->required();
  s_cmd->add_option("--target", samp.target, "Target subset size N")->required();
  s_cmd->add_option("--mode", samp.mode)->check(CLI::IsMember({"flat", "hier"}));
  s_cmd->add_option("--strategy", samp.strategy)->check(CLI::IsMember({"r", "c", "f"}));
  s_cmd->add_option("--seed", samp.seed);
  s_cmd->add_option("--out", samp.out)->required();
  s_cmd->add_flag("--binary", samp.binary, "Write a raw u64 array instead of text");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "2-D mixture study: KL-to-uniform per configuration");
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();
  sim_cmd->add_option("--seed", sim.seed, "First seed");
  sim_cmd->add_option("--seeds", sim.seeds, "Number of consecutive seeds");
  sim_cmd->add_option("--bandwidth", sim.bandwidth, "KDE bandwidth (0 = default)");
  sim_cmd->add_option("--resolution", sim.resolution, "KDE grid bins per axis");
  sim_cmd->add_option("--dataset-out", sim.dataset_out, "Also save the first seed's dataset");

  ZadorArgs zad;
  auto* z_cmd = app.add_subcommand("zador", "1-D centroid density versus p and p^(1/3)");
  z_cmd->add_option("--out", zad.out, "Output directory")->required();
  z_cmd->add_option("--s", zad.s, "Distortion exponents")->delimiter(',');
  z_cmd->add_option("--density", zad.density)
      ->check(CLI::IsMember({"normal", "bimodal", "exponential", "uniform"}));
  z_cmd->add_option("--samples", zad.samples);
  z_cmd->add_option("--k", zad.k);
  z_cmd->add_option("--seed", zad.seed);
  z_cmd->add_option("--bins", zad.bins);

  KlCheckArgs klc;
  auto* k_cmd = app.add_subcommand("kl-check", "Randomized search for counterexamples to KL(Q||U) <= KL(P||U)");
  k_cmd->add_option("--out", klc.out, "Output directory")->required();
  k_cmd->add_option("--trials", klc.trials, "Distributions per t");
  k_cmd->add_option("--max-support", klc.max_support);
  k_cmd->add_option("--t", klc.t)->delimiter(',');
  k_cmd->add_option("--seed", klc.seed);

  StatsArgs st;
  auto* st_cmd = app.add_subcommand("stats", "Per-class cluster balance of a tree");
  st_cmd->add_option("--tree", st.tree)->required();
  st_cmd->add_option("--data", st.data)->required();
  st_cmd->add_option("--labels", st.labels, "One class id per line")->required();
  st_cmd->add_option("--out", st.out, "Output directory")->required();
  st_cmd->add_option("--knn", st.knn);

  GenArgs gen;
  auto* g_cmd = app.add_subcommand("gen", "Write a synthetic dataset");
  g_cmd->add_option("kind", gen.kind, "mixture | pool")->required();
  g_cmd->add_option("--out", gen.out)->required();
  g_cmd->add_option("--labels", gen.labels, "Label file (pool only)");
  g_cmd->add_option("--seed", gen.seed);
  g_cmd->add_option("--classes", gen.classes);
  g_cmd->add_option("--alpha", gen.alpha);
  g_cmd->add_option("--points", gen.points);
  g_cmd->add_option("--dim", gen.dim);
  g_cmd->add_option("--spread", gen.spread);

  ImbalanceArgs imb;
  auto* i_cmd = app.add_subcommand("imbalance", "Power-law class resampling of a labeled pool");
  i_cmd->add_option("--labels", imb.labels)->required();
  i_cmd->add_option("--alpha", imb.alpha);
  i_cmd->add_option("--seed", imb.seed);
  i_cmd->add_option("--out", imb.out)->required();
  i_cmd->add_flag("--binary", imb.binary);

  std::string replay_path;
  auto* r_cmd = app.add_subcommand("replay", "Rerun the command recorded in a manifest");
  r_cmd->add_option("manifest", replay_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    resolve_threads(common.threads);
    if (*c_cmd) return cmd_cluster(cluster, args, out, err);
    if (*s_cmd) return cmd_sample(samp, args, out, err);
    if (*sim_cmd) return cmd_simulate(sim, common, args, out);
    if (*z_cmd) return cmd_zador(zad, common, args, out);
    if (*k_cmd) return cmd_kl_check(klc, args, out);
    if (*st_cmd) return cmd_stats(st, common, args, out, err);
    if (*g_cmd) return cmd_gen(gen, args, out);
    if (*i_cmd) return cmd_imbalance(imb, args, out, err);
    if (*r_cmd) {
      const RunManifest m = read_manifest(replay_path);
      if (m.args.empty() || m.args.front() == "replay") {
        throw ArgumentError("manifest does not record a replayable command");
      }
      return run(m.args, out, err);
    }
  } catch (const ArgumentError& e) {
    err << "argument error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MismatchError& e) {
    err << "mismatch: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const FormatError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DegenerateInputError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace hikm::cli
