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

#include "hikm/io.h"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "json.hpp"

namespace hikm {

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

template <typename T>
void append_raw(std::vector<std::byte>& out, const T& value) {
  const auto* p = reinterpret_cast<const std::byte*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
std::span<const std::byte> as_bytes_of(const std::vector<T>& v) {
  return std::as_bytes(std::span<const T>(v));
}

template <typename T>
std::vector<T> decode_array(const std::vector<std::byte>& bytes,
                            std::size_t count, const std::string& what) {
  if (bytes.size() != count * sizeof(T)) {
    throw FormatError(what + ": expected " + std::to_string(count * sizeof(T)) +
                      " bytes, found " + std::to_string(bytes.size()));
  }
  std::vector<T> out(count);
  if (count > 0) std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

std::string sibling_name(const fs::path& manifest, std::size_t level,
                         const char* suffix) {
  return manifest.filename().string() + ".level" + std::to_string(level) +
         suffix;
}

std::uint64_t parse_hex64(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(what + ": bad checksum '" + s + "'");
  }
  return v;
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t h) {
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view s) {
  return fnv1a64(std::as_bytes(std::span<const char>(s.data(), s.size())));
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t dataset_checksum(const EmbeddingDataset& data) {
  return fnv1a64(as_bytes_of(data.points().values()));
}

void write_file_atomic(const fs::path& path, std::span<const std::byte> bytes) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() +
                ": " + ec.message());
  }
}

void write_file_atomic(const fs::path& path, std::string_view text) {
  write_file_atomic(path,
                    std::as_bytes(std::span<const char>(text.data(), text.size())));
}

std::vector<std::byte> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::byte> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(size));
  if (!in) throw FormatError("read failed for " + path.string());
  return bytes;
}

void save_dataset(const EmbeddingDataset& data, const fs::path& path) {
  std::vector<std::byte> out;
  out.reserve(kDatasetHeaderSize + data.points().values().size() * 4);
  for (char c : kDatasetMagic) out.push_back(static_cast<std::byte>(c));
  append_raw(out, static_cast<std::uint64_t>(data.size()));
  append_raw(out, static_cast<std::uint32_t>(data.dim()));
  append_raw(out, std::uint8_t{0});
  const auto payload = as_bytes_of(data.points().values());
  out.insert(out.end(), payload.begin(), payload.end());
  write_file_atomic(path, out);
}

EmbeddingDataset load_dataset(const fs::path& path) {
  const std::vector<std::byte> bytes = read_file(path);
  const std::string name = path.string();
  if (bytes.size() < kDatasetHeaderSize) {
    throw FormatError(name + ": file shorter than header");
  }
  if (std::memcmp(bytes.data(), kDatasetMagic, 4) != 0) {
    throw FormatError(name + ": bad magic, not an HKM1 embedding file");
  }
  std::uint64_t n = 0;
  std::uint32_t d = 0;
  std::uint8_t dtype = 0;
  std::memcpy(&n, bytes.data() + 4, 8);
  std::memcpy(&d, bytes.data() + 12, 4);
  std::memcpy(&dtype, bytes.data() + 16, 1);
  if (dtype != 0) {
    throw FormatError(name + ": unsupported dtype tag " + std::to_string(dtype));
  }
  if (n == 0 || d == 0) throw FormatError(name + ": header declares n or d = 0");
  const std::size_t payload = bytes.size() - kDatasetHeaderSize;
  if (n > payload / 4 / d) {
    throw FormatError(name + ": truncated, header declares " +
                      std::to_string(n) + " rows but payload holds " +
                      std::to_string(payload / 4 / d));
  }
  if (payload != n * d * 4) {
    throw FormatError(name + ": trailing bytes after payload");
  }
  std::vector<float> values(n * d);
  std::memcpy(values.data(), bytes.data() + kDatasetHeaderSize, payload);
  return EmbeddingDataset(Matrix(n, d, std::move(values)));
}

void save_tree(const ClusterTree& tree, const fs::path& path) {
  tree.validate();
  json manifest;
  manifest["format"] = "hikm-tree";
  manifest["version"] = kTreeFormatVersion;
  manifest["num_points"] = tree.num_points;
  manifest["dim"] = tree.dim;
  manifest["data_checksum"] = hex64(tree.data_checksum);
  manifest["levels"] = json::array();
  const fs::path dir = path.parent_path();
  for (std::size_t t = 1; t <= tree.num_levels(); ++t) {
    const TreeLevel& lv = tree.level(t);
    const std::string cfile = sibling_name(path, t, ".centroids.f32");
    const std::string afile = sibling_name(path, t, ".assign.u32");
    const auto cbytes = as_bytes_of(lv.centroids.values());
    const auto abytes = as_bytes_of(lv.assignment);
    write_file_atomic(dir / cfile, cbytes);
    write_file_atomic(dir / afile, abytes);
    manifest["levels"].push_back({
        {"level", t},
        {"k", lv.num_clusters()},
        {"input_size", lv.input_size()},
        {"centroids", cfile},
        {"centroids_fnv1a", hex64(fnv1a64(cbytes))},
        {"assignment", afile},
        {"assignment_fnv1a", hex64(fnv1a64(abytes))},
    });
  }
  write_file_atomic(path, manifest.dump(2) + "\n");
}

ClusterTree load_tree(const fs::path& path) {
  const std::string name = path.string();
  json manifest;
  {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + name);
    try {
      manifest = json::parse(in);
    } catch (const json::exception& e) {
      throw FormatError(name + ": " + e.what());
    }
  }
  ClusterTree tree;
  try {
    if (manifest.at("format").get<std::string>() != "hikm-tree") {
      throw FormatError(name + ": not a hikm tree manifest");
    }
    const int version = manifest.at("version").get<int>();
    if (version != kTreeFormatVersion) {
      throw FormatError(name + ": unsupported tree version " +
                        std::to_string(version));
    }
    tree.num_points = manifest.at("num_points").get<std::size_t>();
    tree.dim = manifest.at("dim").get<std::size_t>();
    tree.data_checksum =
        parse_hex64(manifest.at("data_checksum").get<std::string>(), name);
    const fs::path dir = path.parent_path();
    for (const json& entry : manifest.at("levels")) {
      TreeLevel lv;
      const auto k = entry.at("k").get<std::size_t>();
      const auto input = entry.at("input_size").get<std::size_t>();
      const auto cfile = entry.at("centroids").get<std::string>();
      const auto afile = entry.at("assignment").get<std::string>();
      const auto cbytes = read_file(dir / cfile);
      const auto abytes = read_file(dir / afile);
      if (fnv1a64(cbytes) !=
          parse_hex64(entry.at("centroids_fnv1a").get<std::string>(), cfile)) {
        throw FormatError(cfile + ": checksum mismatch");
      }
      if (fnv1a64(abytes) !=
          parse_hex64(entry.at("assignment_fnv1a").get<std::string>(), afile)) {
        throw FormatError(afile + ": checksum mismatch");
      }
      lv.centroids = Matrix(k, tree.dim,
                            decode_array<float>(cbytes, k * tree.dim, cfile));
      lv.assignment = decode_array<std::uint32_t>(abytes, input, afile);
      tree.levels.push_back(std::move(lv));
    }
  } catch (const json::exception& e) {
    throw FormatError(name + ": " + e.what());
  }
  tree.validate();
  return tree;
}

void save_indices(std::span<const std::uint64_t> indices, const fs::path& path,
                  IndexFormat format) {
  if (format == IndexFormat::kBinary) {
    write_file_atomic(path, std::as_bytes(indices));
    return;
  }
  std::string text;
  text.reserve(indices.size() * 8);
  for (std::uint64_t i : indices) {
    text += std::to_string(i);
    text += '\n';
  }
  write_file_atomic(path, text);
}

std::vector<std::uint64_t> load_indices(const fs::path& path,
                                        IndexFormat format) {
  const auto bytes = read_file(path);
  if (format == IndexFormat::kBinary) {
    if (bytes.size() % 8 != 0) {
      throw FormatError(path.string() + ": size is not a multiple of 8");
    }
    return decode_array<std::uint64_t>(bytes, bytes.size() / 8, path.string());
  }
  std::vector<std::uint64_t> out;
  std::istringstream in(
      std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw FormatError(path.string() + ": bad index line '" + line + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace hikm
