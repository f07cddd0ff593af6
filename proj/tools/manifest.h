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

#ifndef HIKM_TOOLS_MANIFEST_H_
#define HIKM_TOOLS_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace hikm::cli {

inline constexpr const char* kVersion = "0.1.0";

// Written next to every output. `args` is the full argument list, so
// `hikm replay <manifest>` reruns the command verbatim.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_checksums;  // path -> FNV-1a hex
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;
  std::string version = kVersion;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

// FNV-1a of a file's bytes, hex encoded.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace hikm::cli

#endif  // HIKM_TOOLS_MANIFEST_H_
