// src/net/layers.cc

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

#include "fbaec/net/layers.h"

#include <Eigen/Dense>
#include <cmath>

namespace fbaec {
namespace net {
namespace {

using MatrixRM =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixCM = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic>;

inline float Sigmoid(float v) { return 1.0f / (1.0f + std::exp(-v)); }

void CheckKernel(const Tensor& kernel, const Tensor& bias, const Tensor& x,
                 const char* where) {
  if (kernel.rank() != 4) {
    throw ShapeError(std::string(where) + ": kernel must be rank 4");
  }
  if (bias.rank() != 1 || bias.dim(0) != kernel.dim(0)) {
    throw ShapeError(std::string(where) + ": bias/kernel mismatch");
  }
  if (x.rank() != 3 || x.dim(0) != kernel.dim(1)) {
    throw ShapeError(std::string(where) + ": input channels mismatch");
  }
}

}  // namespace

Tensor Conv2dCausal(const Tensor& x, const Tensor& kernel, const Tensor& bias,
                    int stride_f) {
  CheckKernel(kernel, bias, x, "Conv2dCausal");
  const int out_c = kernel.dim(0);
  const int in_c = kernel.dim(1);
  const int kt = kernel.dim(2);
  const int kf = kernel.dim(3);
  const int t_len = x.dim(1);
  const int f_len = x.dim(2);
  if (f_len < kf) throw ShapeError("Conv2dCausal: input narrower than kernel");
  const int f_out = (f_len - kf) / stride_f + 1;

  const int k_rows = in_c * kt * kf;
  const int n_cols = t_len * f_out;
  MatrixCM col(k_rows, n_cols);
  for (int t = 0; t < t_len; ++t) {
    for (int fo = 0; fo < f_out; ++fo) {
      const int n = t * f_out + fo;
      int k = 0;
      for (int ci = 0; ci < in_c; ++ci) {
        for (int ti = 0; ti < kt; ++ti) {
          const int src_t = t - (kt - 1) + ti;  // causal: pad the past
          for (int fi = 0; fi < kf; ++fi, ++k) {
            col(k, n) =
                src_t >= 0 ? x.at(ci, src_t, fo * stride_f + fi) : 0.0f;
          }
        }
      }
    }
  }

  Eigen::Map<const MatrixRM> w(kernel.data.data(), out_c, k_rows);
  MatrixCM prod = w * col;  // out_c x n_cols

  Tensor out({out_c, t_len, f_out});
  for (int co = 0; co < out_c; ++co) {
    const float b = bias.at(co);
    for (int n = 0; n < n_cols; ++n) {
      out.data[static_cast<size_t>(co) * n_cols + n] = prod(co, n) + b;
    }
  }
  return out;
}

Tensor TrConv2dCausal(const Tensor& x, const Tensor& kernel,
                      const Tensor& bias, int stride_f, int output_pad_f) {
  CheckKernel(kernel, bias, x, "TrConv2dCausal");
  const int out_c = kernel.dim(0);
  const int in_c = kernel.dim(1);
  const int kt = kernel.dim(2);
  const int kf = kernel.dim(3);
  const int t_len = x.dim(1);
  const int f_len = x.dim(2);
  const int f_out = (f_len - 1) * stride_f + kf + output_pad_f;

  // Contribution of every input site to its kt*kf output neighborhood:
  // reorder the kernel to (out_c*kt*kf) x in_c, multiply by the input viewed
  // as in_c x (T*F), then scatter-add (col2im).
  const int k_rows = out_c * kt * kf;
  MatrixRM w(k_rows, in_c);
  for (int co = 0; co < out_c; ++co) {
    for (int ti = 0; ti < kt; ++ti) {
      for (int fi = 0; fi < kf; ++fi) {
        const int r = (co * kt + ti) * kf + fi;
        for (int ci = 0; ci < in_c; ++ci) {
          w(r, ci) = kernel.at(co, ci, ti, fi);
        }
      }
    }
  }
  Eigen::Map<const MatrixRM> xin(x.data.data(), in_c, t_len * f_len);
  MatrixCM prod = w * xin;  // k_rows x (T*F)

  Tensor out({out_c, t_len, f_out});
  for (int co = 0; co < out_c; ++co) {
    const float b = bias.at(co);
    float* plane = out.data.data() + static_cast<size_t>(co) * t_len * f_out;
    for (int i = 0; i < t_len * f_out; ++i) plane[i] = b;
  }
  for (int t = 0; t < t_len; ++t) {
    for (int f = 0; f < f_len; ++f) {
      const int n = t * f_len + f;
      for (int co = 0; co < out_c; ++co) {
        for (int ti = 0; ti < kt; ++ti) {
          const int dst_t = t + ti;
          if (dst_t >= t_len) continue;  // crop trailing step, keeps causality
          for (int fi = 0; fi < kf; ++fi) {
            out.at(co, dst_t, f * stride_f + fi) +=
                prod((co * kt + ti) * kf + fi, n);
          }
        }
      }
    }
  }
  return out;
}

Tensor GatedMerge(const Tensor& content, const Tensor& gate) {
  if (content.shape != gate.shape) {
    throw ShapeError("GatedMerge: shape mismatch");
  }
  Tensor out(content.shape);
  for (size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = content.data[i] * Sigmoid(gate.data[i]);
  }
  return out;
}

Tensor PRelu(const Tensor& x, const Tensor& alpha) {
  if (alpha.NumElements() != 1) {
    throw ShapeError("PRelu: expected a single shared slope");
  }
  const float a = alpha.data[0];
  Tensor out(x.shape);
  for (size_t i = 0; i < x.data.size(); ++i) {
    const float v = x.data[i];
    out.data[i] = v > 0.0f ? v : a * v;
  }
  return out;
}

void DenseInPlace(const Tensor& weight, const Tensor& bias, const float* in,
                  float* out) {
  const int rows = weight.dim(0);
  const int cols = weight.dim(1);
  for (int r = 0; r < rows; ++r) {
    float acc = bias.at(r);
    const float* wr = weight.data.data() + static_cast<size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += wr[c] * in[c];
    out[r] = acc;
  }
}

void LstmScan(const LstmWeights& w, const float* in, int steps, int in_dim,
              int hidden, float* out) {
  if (w.w_ih->rank() != 2 || w.w_ih->dim(0) != 4 * hidden ||
      w.w_ih->dim(1) != in_dim || w.w_hh->dim(0) != 4 * hidden ||
      w.w_hh->dim(1) != hidden || w.bias->NumElements() != 4 * hidden) {
    throw ShapeError("LstmScan: weight shapes inconsistent");
  }
  Eigen::Map<const MatrixRM> wih(w.w_ih->data.data(), 4 * hidden, in_dim);
  Eigen::Map<const MatrixRM> whh(w.w_hh->data.data(), 4 * hidden, hidden);
  Eigen::Map<const Eigen::VectorXf> b(w.bias->data.data(), 4 * hidden);

  Eigen::VectorXf h = Eigen::VectorXf::Zero(hidden);
  Eigen::VectorXf c = Eigen::VectorXf::Zero(hidden);
  Eigen::VectorXf gates(4 * hidden);
  for (int s = 0; s < steps; ++s) {
    Eigen::Map<const Eigen::VectorXf> xs(in + static_cast<size_t>(s) * in_dim,
                                         in_dim);
    gates.noalias() = wih * xs;
    gates.noalias() += whh * h;
    gates += b;
    for (int j = 0; j < hidden; ++j) {
      const float ig = Sigmoid(gates[j]);
      const float fg = Sigmoid(gates[hidden + j]);
      const float gg = std::tanh(gates[2 * hidden + j]);
      const float og = Sigmoid(gates[3 * hidden + j]);
      c[j] = fg * c[j] + ig * gg;
      h[j] = og * std::tanh(c[j]);
    }
    std::copy(h.data(), h.data() + hidden,
              out + static_cast<size_t>(s) * hidden);
  }
}

}  // namespace net
}  // namespace fbaec
