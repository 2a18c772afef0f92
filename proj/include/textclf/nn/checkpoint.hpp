/*
 * Copyright 2026 The textclf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TEXTCLF_NN_CHECKPOINT_HPP_
#define TEXTCLF_NN_CHECKPOINT_HPP_

// Parameter container. Layout (all integers little-endian):
//
//   "TXCK"  u32 version  u32 tensor_count
//   per tensor:
//     u32 name_bytes, name (UTF-8), u32 rank, rank x u64 dims,
//     product(dims) x f32 values (IEEE-754 binary32, little-endian)
//
// A JSON manifest written beside the container records the format version,
// names, shapes and seeds.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "textclf/nn/tensor.hpp"

namespace textclf::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Shape shape;
  std::vector<float> values;
};

void write_checkpoint(const std::filesystem::path& path,
                      std::span<const NamedTensor> tensors);
// Throws IoError on a truncated or malformed file.
std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path);

// {"format_version", "tensors": [{"name", "shape"}...]}
nlohmann::json checkpoint_manifest(std::span<const NamedTensor> tensors);

// Returns the tensor called `name`; throws IoError when missing.
const NamedTensor& find_tensor(std::span<const NamedTensor> tensors,
                               const std::string& name);

}  // namespace textclf::nn

#endif  // TEXTCLF_NN_CHECKPOINT_HPP_
