// include/fbaec/net/layers.h

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

// Inference-only building blocks.  Feature maps are [C][T][F]; convolutions
// use kernel (time 2, freq 3) with causal (past-only) time padding and no
// frequency padding.

#ifndef FBAEC_NET_LAYERS_H_
#define FBAEC_NET_LAYERS_H_

#include "fbaec/net/tensor.h"

namespace fbaec {
namespace net {

// kernel [out_c][in_c][kt][kf], bias [out_c].  Time stride 1 with kt-1
// zeros of past padding; frequency stride stride_f, valid (no padding):
// F_out = floor((F - kf) / stride_f) + 1.
Tensor Conv2dCausal(const Tensor& x, const Tensor& kernel, const Tensor& bias,
                    int stride_f);

// Transposed counterpart; kernel [out_c][in_c][kt][kf].
// F_out = (F - 1) * stride_f + kf + output_pad_f; time axis keeps length T
// (the trailing extra step of the full transposed output is dropped, which
// preserves causality: out[t] depends on in[t-kt+1 .. t]).
Tensor TrConv2dCausal(const Tensor& x, const Tensor& kernel,
                      const Tensor& bias, int stride_f, int output_pad_f);

// content .* sigmoid(gate); elementwise, shapes must match.
Tensor GatedMerge(const Tensor& content, const Tensor& gate);

// max(0,x) + alpha*min(0,x); single shared slope, tensor shape [1].
Tensor PRelu(const Tensor& x, const Tensor& alpha);

// y = W x + b per row: weight [out][in], bias [out].
void DenseInPlace(const Tensor& weight, const Tensor& bias, const float* in,
                  float* out);

// Single-layer unidirectional LSTM cell bank.  Weights in i,f,g,o gate
// order: w_ih [4H][In], w_hh [4H][H], bias [4H].
struct LstmWeights {
  const Tensor* w_ih;
  const Tensor* w_hh;
  const Tensor* bias;
};

// Runs the LSTM over `steps` inputs of width `in_dim` laid out
// contiguously (in[step*in_dim + i]); hidden states written to
// out[step*hidden + h].  Initial state zero.
void LstmScan(const LstmWeights& w, const float* in, int steps, int in_dim,
              int hidden, float* out);

}  // namespace net
}  // namespace fbaec

#endif  // FBAEC_NET_LAYERS_H_
