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

#include "manifest.h"

#include <fstream>

#include "hikm/io.h"

namespace hikm::cli {

using json = nlohmann::json;

json to_json(const RunManifest& m) {
  return json{{"command", m.command},
              {"args", m.args},
              {"config", m.config},
              {"seed", m.seed},
              {"input_checksums", m.input_checksums},
              {"outputs", m.outputs},
              {"wall_time_s", m.wall_time_s},
              {"version", m.version}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.config = j.value("config", json::object());
    m.seed = j.value("seed", std::uint64_t{0});
    m.input_checksums =
        j.value("input_checksums", std::map<std::string, std::string>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.wall_time_s = j.value("wall_time_s", 0.0);
    m.version = j.value("version", std::string{});
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  return m;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(m).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open manifest " + path.string());
  try {
    return manifest_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string file_checksum(const std::filesystem::path& path) {
  return hex64(fnv1a64(read_file(path)));
}

}  // namespace hikm::cli
