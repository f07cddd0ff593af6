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

#ifndef HIKM_TOOLS_CONFIG_H_
#define HIKM_TOOLS_CONFIG_H_

#include <filesystem>
#include <string>

#include "hikm/types.h"
#include "json.hpp"

namespace hikm::cli {

// Clustering config file (JSON). Keys:
//   levels      optional, must equal the length of "k"
//   k           cluster counts, level 1 first (required)
//   m           resampling steps per level (default 0)
//   r           per-level resample counts (default: half the average
//               cluster size of each level)
//   resample_first_level   default false
//   init        "kmeanspp" | "random" (default "kmeanspp")
//   seed        default 0
//   tol         default 1e-4
//   max_iters   default 100
// Unknown keys are rejected. Throws ArgumentError.
ClusterConfig parse_cluster_config(const nlohmann::json& j);
ClusterConfig load_cluster_config(const std::filesystem::path& path);
nlohmann::json to_json(const ClusterConfig& config);

}  // namespace hikm::cli

#endif  // HIKM_TOOLS_CONFIG_H_
