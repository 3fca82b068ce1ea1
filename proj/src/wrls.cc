// src/wrls.cc

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

#include "fbaec/wrls.h"

#include <algorithm>
#include <cmath>

namespace fbaec {
namespace {

bool FiniteRow(const std::complex<double>* row, int n) {
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(row[i].real()) || !std::isfinite(row[i].imag())) {
      return false;
    }
  }
  return true;
}

}  // namespace

void WrlsConfig::Validate() const {
  if (history <= 0) throw ConfigError("WrlsConfig: history must be positive");
  if (lambda <= 0.0 || lambda > 1.0) {
    throw ConfigError("WrlsConfig: lambda must be in (0, 1]");
  }
  if (delta_init <= 0.0) {
    throw ConfigError("WrlsConfig: delta_init must be positive");
  }
}

WrlsFilter::WrlsFilter(int num_bins, const WrlsConfig& cfg)
    : cfg_(cfg), num_bins_(num_bins) {
  cfg_.Validate();
  if (num_bins <= 0) throw ConfigError("WrlsFilter: num_bins must be positive");
  Reset();
}

void WrlsFilter::Reset() {
  const int l = cfg_.history;
  bins_.assign(static_cast<size_t>(num_bins_), BinState());
  for (BinState& b : bins_) {
    b.x.assign(static_cast<size_t>(l), {0.0, 0.0});
    b.w.assign(static_cast<size_t>(l), {0.0, 0.0});
    b.p.assign(static_cast<size_t>(l) * l, {0.0, 0.0});
    for (int i = 0; i < l; ++i) b.p[static_cast<size_t>(i) * l + i] = 1.0 / cfg_.delta_init;
  }
  reinit_count_ = 0;
}

void WrlsFilter::ProcessFrame(const std::complex<double>* x_row,
                              const std::complex<double>* d_row,
                              std::complex<double>* e_row,
                              std::complex<double>* y_row) {
  if (!FiniteRow(x_row, num_bins_) || !FiniteRow(d_row, num_bins_)) {
    throw ProcessError("WrlsFilter: non-finite input frame");
  }
  const int l = cfg_.history;
  std::vector<std::complex<double>> px(static_cast<size_t>(l));

  for (int f = 0; f < num_bins_; ++f) {
    BinState& b = bins_[f];
    std::rotate(b.x.rbegin(), b.x.rbegin() + 1, b.x.rend());
    b.x[0] = x_row[f];

    std::complex<double> y = 0.0;
    for (int i = 0; i < l; ++i) y += std::conj(b.w[i]) * b.x[i];
    std::complex<double> e = d_row[f] - y;
    y_row[f] = y;
    e_row[f] = e;

    for (int i = 0; i < l; ++i) {
      std::complex<double> acc = 0.0;
      const std::complex<double>* row = &b.p[static_cast<size_t>(i) * l];
      for (int j = 0; j < l; ++j) acc += row[j] * b.x[j];
      px[i] = acc;
    }
    double denom = cfg_.lambda;
    for (int i = 0; i < l; ++i) {
      denom += (std::conj(b.x[i]) * px[i]).real();
    }
    if (denom < 1e-300) denom = 1e-300;

    // Gain k = P x / denom; weight and covariance updates exploit the
    // Hermitian structure of P (x^H P == (P x)^H).
    for (int i = 0; i < l; ++i) {
      std::complex<double> k = px[i] / denom;
      b.w[i] += k * std::conj(e);
      std::complex<double>* row = &b.p[static_cast<size_t>(i) * l];
      for (int j = 0; j < l; ++j) {
        row[j] = (row[j] - k * std::conj(px[j])) / cfg_.lambda;
      }
    }

    bool pd = true;
    for (int i = 0; i < l; ++i) {
      double diag = b.p[static_cast<size_t>(i) * l + i].real();
      if (!std::isfinite(diag) || diag <= 0.0) {
        pd = false;
        break;
      }
    }
    if (!pd) {
      std::fill(b.p.begin(), b.p.end(), std::complex<double>(0.0, 0.0));
      for (int i = 0; i < l; ++i) {
        b.p[static_cast<size_t>(i) * l + i] = 1.0 / cfg_.delta_init;
      }
      ++reinit_count_;
    }
  }
}

std::pair<Spectrogram, Spectrogram> WrlsFilter::Process(const Spectrogram& x,
                                                        const Spectrogram& d) {
  if (!x.SameShape(d)) throw ShapeError("WrlsFilter: spectrogram shapes differ");
  if (x.num_bins != num_bins_) {
    throw ShapeError("WrlsFilter: bin count mismatch");
  }
  Spectrogram e(x.num_frames, x.num_bins);
  Spectrogram y(x.num_frames, x.num_bins);
  for (int t = 0; t < x.num_frames; ++t) {
    ProcessFrame(&x.at(t, 0), &d.at(t, 0), &e.at(t, 0), &y.at(t, 0));
  }
  return {std::move(e), std::move(y)};
}

std::vector<std::complex<double>> WrlsFilter::BinWeights(int f) const {
  if (f < 0 || f >= num_bins_) {
    throw ShapeError("WrlsFilter: bin index out of range");
  }
  return bins_[f].w;
}

}  // namespace fbaec
