// src/tde.cc

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

#include "fbaec/tde.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbaec/fft.h"

namespace fbaec {
namespace {

bool AllZero(const double* v, int n) {
  for (int i = 0; i < n; ++i) {
    if (v[i] != 0.0) return false;
  }
  return true;
}

// PHAT-normalized cross spectrum of one zero-padded block pair.
std::vector<std::complex<double>> PhatSpectrum(RealFft& fft, const double* xb,
                                               const double* db, int block,
                                               bool* flagged) {
  const int bins = fft.num_bins();
  if (AllZero(xb, block) || AllZero(db, block)) {
    *flagged = true;
    return std::vector<std::complex<double>>(static_cast<size_t>(bins));
  }
  *flagged = false;

  std::vector<double> padded(static_cast<size_t>(fft.size()), 0.0);
  std::vector<std::complex<double>> xs(static_cast<size_t>(bins));
  std::vector<std::complex<double>> ds(static_cast<size_t>(bins));
  std::copy(xb, xb + block, padded.begin());
  fft.Forward(padded.data(), xs.data());
  std::fill(padded.begin(), padded.end(), 0.0);
  std::copy(db, db + block, padded.begin());
  fft.Forward(padded.data(), ds.data());

  std::vector<std::complex<double>> out(static_cast<size_t>(bins));
  for (int f = 0; f < bins; ++f) {
    std::complex<double> c = ds[f] * std::conj(xs[f]);
    double mag = std::abs(c);
    out[f] = mag > 1e-12 ? c / mag : std::complex<double>(0.0, 0.0);
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> GccPhatCrossSpectrum(
    const std::vector<double>& x_block, const std::vector<double>& d_block,
    int fft_size, bool* flagged) {
  if (x_block.size() != d_block.size()) {
    throw ShapeError("GccPhatCrossSpectrum: block lengths differ");
  }
  if (static_cast<int>(x_block.size()) > fft_size / 2) {
    throw ShapeError("GccPhatCrossSpectrum: block exceeds fft_size/2");
  }
  RealFft fft(fft_size);
  bool local = false;
  auto out = PhatSpectrum(fft, x_block.data(), d_block.data(),
                          static_cast<int>(x_block.size()), &local);
  if (flagged != nullptr) *flagged = local;
  return out;
}

DelayEstimate EstimateDelay(const AudioBuffer& x, const AudioBuffer& d,
                            const TdeConfig& cfg) {
  if (x.sample_rate != d.sample_rate) {
    throw ConfigError("EstimateDelay: sample rates differ");
  }
  const int n = std::min(x.NumSamples(), d.NumSamples());
  if (n < cfg.block) {
    throw ShapeError("EstimateDelay: need at least one analysis block");
  }
  const int num_banks = cfg.max_delay / cfg.block + 1;
  const int bins = cfg.fft_size / 2 + 1;
  RealFft fft(cfg.fft_size);

  std::vector<std::vector<std::complex<double>>> acc(
      static_cast<size_t>(num_banks));
  std::vector<int> blocks_used(static_cast<size_t>(num_banks), 0);

  for (int bank = 0; bank < num_banks; ++bank) {
    const int offset = bank * cfg.block;
    for (int start = offset; start + cfg.block <= n; start += cfg.block) {
      bool flagged = false;
      std::vector<std::complex<double>> cs =
          PhatSpectrum(fft, x.samples.data() + (start - offset),
                       d.samples.data() + start, cfg.block, &flagged);
      if (flagged) continue;  // zero block, excluded from accumulation
      if (blocks_used[bank] == 0) {
        acc[bank] = std::move(cs);
      } else {
        for (int f = 0; f < bins; ++f) {
          acc[bank][f] =
              cfg.smoothing * acc[bank][f] + (1.0 - cfg.smoothing) * cs[f];
        }
      }
      ++blocks_used[bank];
    }
  }

  // Merged correlation over [0, max_delay]: each bank resolves residual
  // lags within one block of its coarse offset.
  std::vector<double> corr(static_cast<size_t>(cfg.max_delay + 1),
                           -std::numeric_limits<double>::infinity());
  bool any = false;
  for (int bank = 0; bank < num_banks; ++bank) {
    if (blocks_used[bank] == 0) continue;
    any = true;
    std::vector<double> r = fft.Inverse(acc[bank]);
    const int offset = bank * cfg.block;
    const int lo = std::max(0, offset - cfg.block + 1);
    const int hi = std::min(cfg.max_delay, offset + cfg.block - 1);
    for (int tau = lo; tau <= hi; ++tau) {
      int rel = ((tau - offset) % cfg.fft_size + cfg.fft_size) % cfg.fft_size;
      corr[tau] = std::max(corr[tau], r[static_cast<size_t>(rel)]);
    }
  }

  DelayEstimate est;
  if (!any) {
    // every block pair was zero; no usable evidence
    est.delay = 0;
    est.confidence = 0.0;
    return est;
  }

  int best = 0;
  for (int tau = 1; tau <= cfg.max_delay; ++tau) {
    if (corr[tau] > corr[best]) best = tau;
  }
  // Second peak outside a +-1 ms guard around the winner.
  const int guard = 16;
  double second = 0.0;
  for (int tau = 0; tau <= cfg.max_delay; ++tau) {
    if (std::abs(tau - best) <= guard) continue;
    second = std::max(second, corr[tau]);
  }
  est.delay = best;
  if (second > 1e-12) {
    est.confidence = std::max(1.0, corr[best] / second);
  } else {
    est.confidence = corr[best] > 0.0 ? 1e9 : 0.0;
  }
  return est;
}

AudioBuffer Align(const AudioBuffer& x, const DelayEstimate& est, int out_len) {
  AudioBuffer out;
  out.sample_rate = x.sample_rate;
  out.samples.assign(static_cast<size_t>(out_len), 0.0);
  for (int i = est.delay; i < out_len; ++i) {
    int src = i - est.delay;
    if (src >= x.NumSamples()) break;
    out.samples[i] = x.samples[src];
  }
  return out;
}

}  // namespace fbaec
