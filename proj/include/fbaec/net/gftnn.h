// include/fbaec/net/gftnn.h

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

// Gated fully-convolutional + FTLSTM post-filter with auxiliary VAD head.
// Inference only: encoder (4 gated conv layers, stride (1,2)), FTLSTM stack,
// twin real/imag gated transposed-conv decoders with 1x1-conv skips, and the
// channel-recurrent VAD module.

#ifndef FBAEC_NET_GFTNN_H_
#define FBAEC_NET_GFTNN_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fbaec/features.h"
#include "fbaec/losses.h"
#include "fbaec/net/weights.h"
#include "fbaec/stft.h"

namespace fbaec {

struct ModelArch {
  int channels = 128;       // conv/lstm width C
  int input_channels = 6;   // 2 x signals in the input combination
  int num_ftlstm = 2;
  int fft_bins = 161;       // frequency size at the network input

  static constexpr int kConvLayers = 4;
  static constexpr int kKernelT = 2;
  static constexpr int kKernelF = 3;
  static constexpr int kStrideF = 2;

  // Frequency sizes through the encoder: input first, then one entry per
  // layer (161 -> 80 -> 39 -> 19 -> 9 at the defaults).
  std::vector<int> FreqChain() const;
  void Validate() const;
};

struct TensorSpec {
  std::string name;
  std::vector<int> shape;
};

// Exact tensor inventory the architecture requires, in canonical order.
std::vector<TensorSpec> RequiredTensors(const ModelArch& arch);

struct NetOutput {
  Spectrogram s_hat;  // decompressed complex near-end estimate, T x fft_bins
  VadLogits logits;   // T x 2
  // Stage name -> shape, recorded in forward order (conformance probes).
  std::vector<std::pair<std::string, std::vector<int>>> trace;
};

class GftnnModel {
 public:
  // Strict: every required tensor present with the exact shape, no extras.
  // Throws ModelLoadError naming the offending tensor.
  static GftnnModel FromWeights(const ModelArch& arch, net::WeightMap weights);
  static GftnnModel LoadFromFile(const ModelArch& arch,
                                 const std::string& path);
  static GftnnModel RandomInit(const ModelArch& arch, uint32_t seed);

  // feat must carry compressed spectra; the inverse power law
  // (exponent 1/compress_power) is applied to the decoder output.
  NetOutput Forward(const FeatureTensor& feat,
                    double compress_power = 0.5) const;

  int64_t ParamCount() const;
  const ModelArch& arch() const { return arch_; }
  const net::WeightMap& weights() const { return weights_; }

 private:
  GftnnModel(const ModelArch& arch, net::WeightMap w);

  const net::Tensor& T(const std::string& name) const;

  ModelArch arch_;
  net::WeightMap weights_;
};

}  // namespace fbaec

#endif  // FBAEC_NET_GFTNN_H_
