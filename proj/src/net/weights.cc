// src/net/weights.cc

// Copyright 2026  FBAEC authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "fbaec/net/weights.h"

#include <cstring>
#include <fstream>

namespace fbaec {
namespace net {
namespace {

constexpr char kMagic[4] = {'G', 'F', 'T', 'W'};
constexpr uint8_t kMaxRank = 4;
constexpr uint32_t kMaxDim = 1u << 24;

template <typename T>
void WritePod(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T ReadPod(std::ifstream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw ModelLoadError(std::string("weights: truncated ") + what);
  return v;
}

}  // namespace

void SaveWeights(const std::string& path, const WeightMap& weights) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("SaveWeights: cannot open " + path);
  out.write(kMagic, 4);
  WritePod<uint32_t>(out, kWeightFormatVersion);
  WritePod<uint32_t>(out, static_cast<uint32_t>(weights.size()));
  for (const auto& [name, tensor] : weights) {
    if (name.empty() || name.size() > 0xffff) {
      throw ConfigError("SaveWeights: bad tensor name");
    }
    if (tensor.rank() < 1 || tensor.rank() > kMaxRank) {
      throw ShapeError("SaveWeights: unsupported rank for " + name);
    }
    WritePod<uint16_t>(out, static_cast<uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    WritePod<uint8_t>(out, static_cast<uint8_t>(tensor.rank()));
    for (int d : tensor.shape) WritePod<uint32_t>(out, static_cast<uint32_t>(d));
    out.write(reinterpret_cast<const char*>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.data.size() * sizeof(float)));
  }
  if (!out) throw IoError("SaveWeights: write failed for " + path);
}

WeightMap LoadWeights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelLoadError("LoadWeights: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ModelLoadError("LoadWeights: bad magic in " + path);
  }
  const uint32_t version = ReadPod<uint32_t>(in, "version");
  if (version != kWeightFormatVersion) {
    throw ModelLoadError("LoadWeights: unsupported version " +
                         std::to_string(version));
  }
  const uint32_t count = ReadPod<uint32_t>(in, "tensor count");

  WeightMap weights;
  for (uint32_t i = 0; i < count; ++i) {
    const uint16_t name_len = ReadPod<uint16_t>(in, "name length");
    if (name_len == 0) throw ModelLoadError("LoadWeights: empty tensor name");
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw ModelLoadError("LoadWeights: truncated name");
    const uint8_t rank = ReadPod<uint8_t>(in, "rank");
    if (rank < 1 || rank > kMaxRank) {
      throw ModelLoadError("LoadWeights: bad rank for " + name);
    }
    std::vector<int> shape(rank);
    uint64_t elems = 1;
    for (int d = 0; d < rank; ++d) {
      const uint32_t dim = ReadPod<uint32_t>(in, "dimension");
      if (dim == 0 || dim > kMaxDim) {
        throw ModelLoadError("LoadWeights: bad dimension for " + name);
      }
      shape[static_cast<size_t>(d)] = static_cast<int>(dim);
      elems *= dim;
    }
    if (elems > (1ull << 28)) {
      throw ModelLoadError("LoadWeights: tensor too large: " + name);
    }
    Tensor t(shape);
    in.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(elems * sizeof(float)));
    if (!in) throw ModelLoadError("LoadWeights: truncated data for " + name);
    if (!weights.emplace(std::move(name), std::move(t)).second) {
      throw ModelLoadError("LoadWeights: duplicate tensor name");
    }
  }
  in.peek();
  if (!in.eof()) {
    throw ModelLoadError("LoadWeights: trailing bytes in " + path);
  }
  return weights;
}

}  // namespace net
}  // namespace fbaec
