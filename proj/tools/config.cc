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

#include "config.h"

#include <fstream>
#include <set>

namespace hikm::cli {

using json = nlohmann::json;

ClusterConfig parse_cluster_config(const json& j) {
  static const std::set<std::string> kKeys = {
      "levels", "k", "m", "r", "resample_first_level",
      "init", "seed", "tol", "max_iters"};
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ArgumentError("unknown config key '" + key + "'");
  }
  ClusterConfig c;
  try {
    if (!j.contains("k")) throw ArgumentError("config is missing 'k'");
    c.k = j.at("k").get<std::vector<std::size_t>>();
    if (j.contains("levels") && j.at("levels").get<std::size_t>() != c.k.size()) {
      throw ArgumentError("'levels' does not match the length of 'k'");
    }
    if (j.contains("m")) c.resample_steps = j.at("m").get<std::size_t>();
    if (j.contains("r")) c.resample_counts = j.at("r").get<std::vector<std::size_t>>();
    if (j.contains("resample_first_level")) {
      c.resample_first_level = j.at("resample_first_level").get<bool>();
    }
    if (j.contains("init")) c.init = parse_init_method(j.at("init").get<std::string>());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("max_iters")) c.max_iters = j.at("max_iters").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ClusterConfig load_cluster_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ArgumentError(path.string() + ": " + e.what());
  }
  return parse_cluster_config(j);
}

json to_json(const ClusterConfig& c) {
  json j;
  j["levels"] = c.k.size();
  j["k"] = c.k;
  j["m"] = c.resample_steps;
  if (!c.resample_counts.empty()) j["r"] = c.resample_counts;
  j["resample_first_level"] = c.resample_first_level;
  j["init"] = to_string(c.init);
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["max_iters"] = c.max_iters;
  return j;
}

}  // namespace hikm::cli
