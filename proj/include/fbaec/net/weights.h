// include/fbaec/net/weights.h

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

// Weight container file format:
//   magic "GFTW", version u32, tensor count u32;
//   per tensor: name length u16, UTF-8 name, rank u8, dims u32 each,
//   float32 little-endian data, row-major.

#ifndef FBAEC_NET_WEIGHTS_H_
#define FBAEC_NET_WEIGHTS_H_

#include <map>
#include <string>

#include "fbaec/net/tensor.h"

namespace fbaec {
namespace net {

using WeightMap = std::map<std::string, Tensor>;

constexpr uint32_t kWeightFormatVersion = 1;

void SaveWeights(const std::string& path, const WeightMap& weights);

// Throws ModelLoadError on malformed files (bad magic/version, truncation,
// duplicate names, absurd shapes).
WeightMap LoadWeights(const std::string& path);

}  // namespace net
}  // namespace fbaec

#endif  // FBAEC_NET_WEIGHTS_H_
