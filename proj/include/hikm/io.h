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

#ifndef HIKM_IO_H_
#define HIKM_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hikm/types.h"

namespace hikm {

// Embedding file layout (little-endian):
//   "HKM1" | n: u64 | d: u32 | dtype: u8 (0 = f32) | n*d f32, row-major
inline constexpr char kDatasetMagic[4] = {'H', 'K', 'M', '1'};
inline constexpr std::size_t kDatasetHeaderSize = 4 + 8 + 4 + 1;
inline constexpr int kTreeFormatVersion = 1;

std::uint64_t fnv1a64(std::span<const std::byte> bytes,
                      std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

// Checksum of the f32 payload of a dataset, as stored in ClusterTree.
std::uint64_t dataset_checksum(const EmbeddingDataset& data);

// Writes `bytes` to a sibling temp file and renames it over `path`, so a
// reader never observes a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::byte> bytes);
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view text);
std::vector<std::byte> read_file(const std::filesystem::path& path);

void save_dataset(const EmbeddingDataset& data,
                  const std::filesystem::path& path);
// FormatError on bad magic/header or truncation; DataError (with the row)
// on NaN/Inf.
EmbeddingDataset load_dataset(const std::filesystem::path& path);

// A tree is a JSON manifest at `path` plus, per level t, the sibling files
// "<path>.level<t>.centroids.f32" and "<path>.level<t>.assign.u32". The
// manifest records sizes and FNV-1a checksums of every sibling.
void save_tree(const ClusterTree& tree, const std::filesystem::path& path);
// FormatError on version/checksum/size problems, ValidationError when the
// arrays violate tree invariants.
ClusterTree load_tree(const std::filesystem::path& path);

// Sampled subsets: one decimal index per line, or a raw u64 array.
enum class IndexFormat { kText, kBinary };
void save_indices(std::span<const std::uint64_t> indices,
                  const std::filesystem::path& path, IndexFormat format);
std::vector<std::uint64_t> load_indices(const std::filesystem::path& path,
                                        IndexFormat format);

}  // namespace hikm

#endif  // HIKM_IO_H_
