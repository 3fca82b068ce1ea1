// src/net/gftnn.cc

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

#include "fbaec/net/gftnn.h"

#include <cmath>
#include <random>

#include "fbaec/net/layers.h"

namespace fbaec {

using net::Tensor;

std::vector<int> ModelArch::FreqChain() const {
  std::vector<int> chain{fft_bins};
  int f = fft_bins;
  for (int i = 0; i < kConvLayers; ++i) {
    f = (f - kKernelF) / kStrideF + 1;
    chain.push_back(f);
  }
  return chain;
}

void ModelArch::Validate() const {
  if (channels <= 0) throw ConfigError("ModelArch: channels must be positive");
  if (input_channels != 4 && input_channels != 6) {
    throw ConfigError("ModelArch: input_channels must be 4 or 6");
  }
  if (num_ftlstm < 1) {
    throw ConfigError("ModelArch: need at least one FTLSTM block");
  }
  if (fft_bins < 33) {
    throw ConfigError("ModelArch: fft_bins too small for four stride-2 layers");
  }
  for (int f : FreqChain()) {
    if (f < 1) throw ConfigError("ModelArch: frequency chain collapses");
  }
}

std::vector<TensorSpec> RequiredTensors(const ModelArch& arch) {
  arch.Validate();
  const int c = arch.channels;
  const int kt = ModelArch::kKernelT;
  const int kf = ModelArch::kKernelF;
  std::vector<TensorSpec> specs;
  auto add = [&specs](std::string name, std::vector<int> shape) {
    specs.push_back({std::move(name), std::move(shape)});
  };

  for (int i = 1; i <= ModelArch::kConvLayers; ++i) {
    const int in_c = i == 1 ? arch.input_channels : c;
    const std::string p = "enc" + std::to_string(i);
    add(p + ".content.kernel", {c, in_c, kt, kf});
    add(p + ".content.bias", {c});
    add(p + ".gate.kernel", {c, in_c, kt, kf});
    add(p + ".gate.bias", {c});
    add(p + ".prelu", {1});
    const std::string s = "skip" + std::to_string(i);
    add(s + ".kernel", {c, c, 1, 1});
    add(s + ".bias", {c});
  }

  for (int i = 1; i <= arch.num_ftlstm; ++i) {
    for (const char* axis : {"f", "t"}) {
      const std::string p =
          "ftlstm" + std::to_string(i) + "." + axis;
      add(p + ".w_ih", {4 * c, c});
      add(p + ".w_hh", {4 * c, c});
      add(p + ".bias", {4 * c});
      add(p + ".proj.weight", {c, c});
      add(p + ".proj.bias", {c});
    }
  }

  for (const char* branch : {"dec_r", "dec_i"}) {
    for (int i = 1; i <= ModelArch::kConvLayers; ++i) {
      const int out_c = i == ModelArch::kConvLayers ? 1 : c;
      const std::string p = branch + std::to_string(i);
      add(p + ".content.kernel", {out_c, 2 * c, kt, kf});
      add(p + ".content.bias", {out_c});
      add(p + ".gate.kernel", {out_c, 2 * c, kt, kf});
      add(p + ".gate.bias", {out_c});
    }
  }

  const int f_last = arch.FreqChain().back();
  add("vad.fdense1.weight", {16, f_last});
  add("vad.fdense1.bias", {16});
  add("vad.flstm.w_ih", {4 * c, c});
  add("vad.flstm.w_hh", {4 * c, c});
  add("vad.flstm.bias", {4 * c});
  add("vad.fdense2.weight", {1, 16});
  add("vad.fdense2.bias", {1});
  add("vad.cdense.weight", {2, c});
  add("vad.cdense.bias", {2});
  return specs;
}

GftnnModel::GftnnModel(const ModelArch& arch, net::WeightMap w)
    : arch_(arch), weights_(std::move(w)) {}

GftnnModel GftnnModel::FromWeights(const ModelArch& arch,
                                   net::WeightMap weights) {
  const std::vector<TensorSpec> specs = RequiredTensors(arch);
  for (const TensorSpec& s : specs) {
    auto it = weights.find(s.name);
    if (it == weights.end()) {
      throw ModelLoadError("model: missing tensor " + s.name);
    }
    if (it->second.shape != s.shape) {
      throw ModelLoadError("model: shape mismatch for " + s.name);
    }
  }
  if (weights.size() != specs.size()) {
    for (const auto& [name, unused] : weights) {
      bool known = false;
      for (const TensorSpec& s : specs) {
        if (s.name == name) {
          known = true;
          break;
        }
      }
      if (!known) throw ModelLoadError("model: unexpected tensor " + name);
    }
  }
  return GftnnModel(arch, std::move(weights));
}

GftnnModel GftnnModel::LoadFromFile(const ModelArch& arch,
                                    const std::string& path) {
  return FromWeights(arch, net::LoadWeights(path));
}

GftnnModel GftnnModel::RandomInit(const ModelArch& arch, uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  net::WeightMap weights;
  for (const TensorSpec& s : RequiredTensors(arch)) {
    Tensor t(s.shape);
    const bool is_bias = s.shape.size() == 1 && s.name.find("prelu") == std::string::npos;
    if (s.name.find("prelu") != std::string::npos) {
      t.data[0] = 0.25f;
    } else if (is_bias) {
      // biases start at zero
    } else {
      // fan-in scaling keeps activations bounded through the stack
      int64_t fan_in = 1;
      for (size_t d = 1; d < s.shape.size(); ++d) fan_in *= s.shape[d];
      const float scale = 1.0f / std::sqrt(static_cast<float>(fan_in));
      for (float& v : t.data) v = scale * gauss(rng);
    }
    weights.emplace(s.name, std::move(t));
  }
  return FromWeights(arch, std::move(weights));
}

const Tensor& GftnnModel::T(const std::string& name) const {
  auto it = weights_.find(name);
  if (it == weights_.end()) {
    throw ModelLoadError("model: tensor lookup failed: " + name);
  }
  return it->second;
}

int64_t GftnnModel::ParamCount() const {
  int64_t n = 0;
  for (const auto& [name, t] : weights_) n += t.NumElements();
  return n;
}

namespace {

Tensor ConcatChannels(const Tensor& a, const Tensor& b) {
  if (a.rank() != 3 || b.rank() != 3 || a.dim(1) != b.dim(1) ||
      a.dim(2) != b.dim(2)) {
    throw ShapeError("ConcatChannels: incompatible shapes");
  }
  Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.data.size());
  return out;
}

}  // namespace

NetOutput GftnnModel::Forward(const FeatureTensor& feat,
                              double compress_power) const {
  if (feat.channels != arch_.input_channels) {
    throw ShapeError("Forward: feature channel count does not match arch");
  }
  if (feat.num_bins != arch_.fft_bins) {
    throw ShapeError("Forward: feature bin count does not match arch");
  }
  if (feat.num_frames < 1) throw ShapeError("Forward: empty feature tensor");
  if (!(compress_power > 0.0 && compress_power <= 1.0)) {
    throw ConfigError("Forward: compress_power must be in (0, 1]");
  }
  const int c = arch_.channels;
  const int t_len = feat.num_frames;

  NetOutput out;
  auto trace = [&out](const std::string& name, std::vector<int> shape) {
    out.trace.emplace_back(name, std::move(shape));
  };

  Tensor x({feat.channels, t_len, feat.num_bins});
  std::copy(feat.data.begin(), feat.data.end(), x.data.begin());
  trace("input", x.shape);

  // Encoder with per-layer 1x1 skip taps.
  std::vector<Tensor> skips;
  for (int i = 1; i <= ModelArch::kConvLayers; ++i) {
    const std::string p = "enc" + std::to_string(i);
    Tensor content = net::Conv2dCausal(x, T(p + ".content.kernel"),
                                       T(p + ".content.bias"),
                                       ModelArch::kStrideF);
    Tensor gate =
        net::Conv2dCausal(x, T(p + ".gate.kernel"), T(p + ".gate.bias"),
                          ModelArch::kStrideF);
    x = net::PRelu(net::GatedMerge(content, gate), T(p + ".prelu"));
    trace(p, x.shape);
    const std::string s = "skip" + std::to_string(i);
    skips.push_back(
        net::Conv2dCausal(x, T(s + ".kernel"), T(s + ".bias"), 1));
  }

  // FTLSTM stack on the C x T x F_last map.
  const int f_last = x.dim(2);
  std::vector<float> seq_in(static_cast<size_t>(std::max(f_last, t_len)) * c);
  std::vector<float> seq_out(seq_in.size());
  std::vector<float> proj(static_cast<size_t>(c));
  for (int blk = 1; blk <= arch_.num_ftlstm; ++blk) {
    const std::string p = "ftlstm" + std::to_string(blk);
    // Frequency scan within each frame, projection, residual.
    {
      net::LstmWeights lw{&T(p + ".f.w_ih"), &T(p + ".f.w_hh"),
                          &T(p + ".f.bias")};
      const Tensor& pw = T(p + ".f.proj.weight");
      const Tensor& pb = T(p + ".f.proj.bias");
      for (int t = 0; t < t_len; ++t) {
        for (int f = 0; f < f_last; ++f) {
          for (int ch = 0; ch < c; ++ch) {
            seq_in[static_cast<size_t>(f) * c + ch] = x.at(ch, t, f);
          }
        }
        net::LstmScan(lw, seq_in.data(), f_last, c, c, seq_out.data());
        for (int f = 0; f < f_last; ++f) {
          net::DenseInPlace(pw, pb, seq_out.data() + static_cast<size_t>(f) * c,
                            proj.data());
          for (int ch = 0; ch < c; ++ch) x.at(ch, t, f) += proj[ch];
        }
      }
    }
    // Causal time scan per frequency, projection, residual.
    {
      net::LstmWeights lw{&T(p + ".t.w_ih"), &T(p + ".t.w_hh"),
                          &T(p + ".t.bias")};
      const Tensor& pw = T(p + ".t.proj.weight");
      const Tensor& pb = T(p + ".t.proj.bias");
      for (int f = 0; f < f_last; ++f) {
        for (int t = 0; t < t_len; ++t) {
          for (int ch = 0; ch < c; ++ch) {
            seq_in[static_cast<size_t>(t) * c + ch] = x.at(ch, t, f);
          }
        }
        net::LstmScan(lw, seq_in.data(), t_len, c, c, seq_out.data());
        for (int t = 0; t < t_len; ++t) {
          net::DenseInPlace(pw, pb, seq_out.data() + static_cast<size_t>(t) * c,
                            proj.data());
          for (int ch = 0; ch < c; ++ch) x.at(ch, t, f) += proj[ch];
        }
      }
    }
    trace(p, x.shape);
  }

  // VAD head.
  {
    const Tensor& d1w = T("vad.fdense1.weight");
    const Tensor& d1b = T("vad.fdense1.bias");
    const Tensor& d2w = T("vad.fdense2.weight");
    const Tensor& d2b = T("vad.fdense2.bias");
    const Tensor& cw = T("vad.cdense.weight");
    const Tensor& cb = T("vad.cdense.bias");
    net::LstmWeights lw{&T("vad.flstm.w_ih"), &T("vad.flstm.w_hh"),
                        &T("vad.flstm.bias")};
    trace("vad.fdense1", {t_len, c, 16});
    trace("vad.reshape1", {t_len, 4 * c, 4});
    trace("vad.maxpool", {t_len, 4 * c, 1});
    trace("vad.reshape2", {t_len, c, 4});
    trace("vad.flstm", {t_len, c, 4});
    trace("vad.gate", {t_len, c, 16});
    trace("vad.fdense2", {t_len, c, 1});
    trace("vad.cdense", {t_len, 2});

    out.logits.resize(static_cast<size_t>(t_len));
    std::vector<float> feat16(static_cast<size_t>(c) * 16);
    std::vector<float> frame_in(static_cast<size_t>(f_last));
    std::vector<float> pooled(static_cast<size_t>(4) * c);
    std::vector<float> lstm_in(static_cast<size_t>(4) * c);
    std::vector<float> lstm_out(static_cast<size_t>(4) * c);
    std::vector<float> channel_vec(static_cast<size_t>(c));
    for (int t = 0; t < t_len; ++t) {
      // F-Dense F_last -> 16 per channel.
      for (int ch = 0; ch < c; ++ch) {
        for (int f = 0; f < f_last; ++f) frame_in[f] = x.at(ch, t, f);
        net::DenseInPlace(d1w, d1b, frame_in.data(),
                          feat16.data() + static_cast<size_t>(ch) * 16);
      }
      // (c, j=4a+r) -> channel group 4c+a, position r; max-pool over r.
      for (int ch = 0; ch < c; ++ch) {
        for (int a = 0; a < 4; ++a) {
          float m = feat16[static_cast<size_t>(ch) * 16 + 4 * a];
          for (int r = 1; r < 4; ++r) {
            m = std::max(m, feat16[static_cast<size_t>(ch) * 16 + 4 * a + r]);
          }
          pooled[static_cast<size_t>(4) * ch + a] = m;
        }
      }
      // Back to (c, a); recur over the 4-wide group axis with C-wide input.
      for (int a = 0; a < 4; ++a) {
        for (int ch = 0; ch < c; ++ch) {
          lstm_in[static_cast<size_t>(a) * c + ch] =
              pooled[static_cast<size_t>(4) * ch + a];
        }
      }
      net::LstmScan(lw, lstm_in.data(), 4, c, c, lstm_out.data());
      // Gate G (T x 1 x 4 x C) against the pre-pool tensor H (T x 4 x 4 x C):
      // broadcast over the group axis, aligned on the position axis.
      for (int ch = 0; ch < c; ++ch) {
        for (int a = 0; a < 4; ++a) {
          for (int r = 0; r < 4; ++r) {
            feat16[static_cast<size_t>(ch) * 16 + 4 * a + r] *=
                lstm_out[static_cast<size_t>(r) * c + ch];
          }
        }
      }
      // F-Dense 16 -> 1, then C-Dense C -> 2.
      for (int ch = 0; ch < c; ++ch) {
        float scalar;
        net::DenseInPlace(d2w, d2b,
                          feat16.data() + static_cast<size_t>(ch) * 16,
                          &scalar);
        channel_vec[ch] = scalar;
      }
      float logits[2];
      net::DenseInPlace(cw, cb, channel_vec.data(), logits);
      out.logits[static_cast<size_t>(t)] = {static_cast<double>(logits[0]),
                                            static_cast<double>(logits[1])};
    }
  }

  // Twin decoders with skip concatenation (deep first).
  Tensor planes[2];
  const char* branches[2] = {"dec_r", "dec_i"};
  for (int br = 0; br < 2; ++br) {
    Tensor u = x;
    for (int i = 1; i <= ModelArch::kConvLayers; ++i) {
      const Tensor& skip = skips[static_cast<size_t>(ModelArch::kConvLayers - i)];
      Tensor cat = ConcatChannels(u, skip);
      const std::string p = branches[br] + std::to_string(i);
      const int opad = i == 3 ? 1 : 0;
      Tensor content =
          net::TrConv2dCausal(cat, T(p + ".content.kernel"),
                              T(p + ".content.bias"), ModelArch::kStrideF, opad);
      Tensor gate =
          net::TrConv2dCausal(cat, T(p + ".gate.kernel"), T(p + ".gate.bias"),
                              ModelArch::kStrideF, opad);
      u = net::GatedMerge(content, gate);
      trace(std::string(branches[br]) + std::to_string(i), u.shape);
    }
    planes[br] = std::move(u);
  }
  if (planes[0].dim(2) != arch_.fft_bins || planes[0].dim(0) != 1) {
    throw ShapeError("Forward: decoder output shape unexpected");
  }

  Spectrogram compressed(t_len, arch_.fft_bins);
  for (int t = 0; t < t_len; ++t) {
    for (int f = 0; f < arch_.fft_bins; ++f) {
      compressed.at(t, f) = {static_cast<double>(planes[0].at(0, t, f)),
                             static_cast<double>(planes[1].at(0, t, f))};
    }
  }
  out.s_hat = CompressSpectrum(compressed, 1.0 / compress_power);
  trace("output", {t_len, arch_.fft_bins});
  return out;
}

}  // namespace fbaec
