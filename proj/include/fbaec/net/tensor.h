// include/fbaec/net/tensor.h

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

#ifndef FBAEC_NET_TENSOR_H_
#define FBAEC_NET_TENSOR_H_

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "fbaec/common.h"

namespace fbaec {
namespace net {

// Dense float32 tensor, row-major (last dimension fastest).  Rank <= 4.
struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    data.assign(static_cast<size_t>(NumElements()), 0.0f);
  }

  int64_t NumElements() const {
    int64_t n = 1;
    for (int d : shape) {
      if (d < 0) throw ShapeError("Tensor: negative dimension");
      n *= d;
    }
    return shape.empty() ? 0 : n;
  }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }

  float& at(int i) { return data[static_cast<size_t>(i)]; }
  float at(int i) const { return data[static_cast<size_t>(i)]; }
  float& at(int i, int j) {
    return data[static_cast<size_t>(i) * shape[1] + j];
  }
  float at(int i, int j) const {
    return data[static_cast<size_t>(i) * shape[1] + j];
  }
  float& at(int i, int j, int k) {
    return data[(static_cast<size_t>(i) * shape[1] + j) * shape[2] + k];
  }
  float at(int i, int j, int k) const {
    return data[(static_cast<size_t>(i) * shape[1] + j) * shape[2] + k];
  }
  float& at(int i, int j, int k, int l) {
    return data[((static_cast<size_t>(i) * shape[1] + j) * shape[2] + k) *
                    shape[3] +
                l];
  }
  float at(int i, int j, int k, int l) const {
    return data[((static_cast<size_t>(i) * shape[1] + j) * shape[2] + k) *
                    shape[3] +
                l];
  }

  bool ShapeIs(const std::vector<int>& s) const { return shape == s; }
};

}  // namespace net
}  // namespace fbaec

#endif  // FBAEC_NET_TENSOR_H_
