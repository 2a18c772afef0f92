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

#include "textclf/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "textclf/error.hpp"

namespace textclf::nn {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  Reader(std::string bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::string str(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw IoError(path_ + ": truncated checkpoint");
  }

  std::string bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_checkpoint(const std::filesystem::path& path,
                      std::span<const NamedTensor> tensors) {
  std::string out = "TXCK";
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    if (shape_size(t.shape) != t.values.size()) {
      throw ShapeError("checkpoint tensor '" + t.name + "' has shape " +
                       shape_string(t.shape) + " but " + std::to_string(t.values.size()) +
                       " values");
    }
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out += t.name;
    put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) put_u64(out, d);
    for (float v : t.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("failed writing " + path.string());
}

std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  Reader r(std::move(bytes), path.string());
  if (r.str(4) != "TXCK") throw IoError(path.string() + ": not a checkpoint file");
  const auto version = r.uint(4);
  if (version != kCheckpointVersion) {
    throw IoError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = r.uint(4);
  std::vector<NamedTensor> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name = r.str(r.uint(4));
    const auto rank = r.uint(4);
    for (std::uint64_t d = 0; d < rank; ++d) t.shape.push_back(r.uint(8));
    const std::size_t n = shape_size(t.shape);
    t.values.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      t.values.push_back(std::bit_cast<float>(static_cast<std::uint32_t>(r.uint(4))));
    }
    out.push_back(std::move(t));
  }
  if (!r.done()) throw IoError(path.string() + ": trailing bytes after last tensor");
  return out;
}

nlohmann::json checkpoint_manifest(std::span<const NamedTensor> tensors) {
  nlohmann::json j;
  j["format_version"] = kCheckpointVersion;
  j["tensors"] = nlohmann::json::array();
  for (const NamedTensor& t : tensors) {
    j["tensors"].push_back({{"name", t.name}, {"shape", t.shape}});
  }
  return j;
}

const NamedTensor& find_tensor(std::span<const NamedTensor> tensors, const std::string& name) {
  for (const NamedTensor& t : tensors) {
    if (t.name == name) return t;
  }
  throw IoError("checkpoint has no tensor named '" + name + "'");
}

}  // namespace textclf::nn
