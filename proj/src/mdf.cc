// src/mdf.cc

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

#include "fbaec/mdf.h"

#include <algorithm>
#include <cmath>

namespace fbaec {

int MdfConfig::NumPartitions() const {
  double tail_samples = tail_ms * sample_rate / 1000.0;
  return static_cast<int>(std::ceil(tail_samples / block));
}

void MdfConfig::Validate() const {
  if (block <= 0) throw ConfigError("MdfConfig: block must be positive");
  if (tail_ms <= 0.0) throw ConfigError("MdfConfig: tail_ms must be positive");
  if (mu <= 0.0 || mu > 2.0) throw ConfigError("MdfConfig: mu out of range");
  if (delta <= 0.0) throw ConfigError("MdfConfig: delta must be positive");
  if (power_smoothing < 0.0 || power_smoothing >= 1.0) {
    throw ConfigError("MdfConfig: power_smoothing must be in [0, 1)");
  }
  if (sample_rate <= 0) {
    throw ConfigError("MdfConfig: sample_rate must be positive");
  }
}

MdfFilter::MdfFilter(const MdfConfig& cfg)
    : cfg_(cfg), fft_size_(2 * cfg.block), fft_(2 * cfg.block) {
  cfg_.Validate();
  bins_ = fft_size_ / 2 + 1;
  Reset();
}

void MdfFilter::Reset() {
  const int k = cfg_.NumPartitions();
  x_hist_.assign(static_cast<size_t>(k),
                 std::vector<std::complex<double>>(
                     static_cast<size_t>(bins_), {0.0, 0.0}));
  w_ = x_hist_;
  x_prev_.assign(static_cast<size_t>(cfg_.block), 0.0);
  power_.assign(static_cast<size_t>(bins_), 0.0);
  power_primed_ = false;
}

AecBlock MdfFilter::ProcessBlock(const std::vector<double>& x,
                                 const std::vector<double>& d) {
  const int n = cfg_.block;
  if (static_cast<int>(x.size()) != n || static_cast<int>(d.size()) != n) {
    throw ShapeError("MdfFilter: block size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(d[i])) {
      throw ProcessError("MdfFilter: non-finite input sample");
    }
  }
  const int k_parts = cfg_.NumPartitions();

  // Shift partition history and transform the new overlap-save segment.
  std::rotate(x_hist_.rbegin(), x_hist_.rbegin() + 1, x_hist_.rend());
  std::vector<double> cat(static_cast<size_t>(fft_size_));
  std::copy(x_prev_.begin(), x_prev_.end(), cat.begin());
  std::copy(x.begin(), x.end(), cat.begin() + n);
  fft_.Forward(cat.data(), x_hist_[0].data());
  std::copy(x.begin(), x.end(), x_prev_.begin());

  // Echo estimate: accumulate partitions, keep the valid overlap-save half.
  std::vector<std::complex<double>> y_spec(static_cast<size_t>(bins_),
                                           {0.0, 0.0});
  for (int k = 0; k < k_parts; ++k) {
    for (int f = 0; f < bins_; ++f) y_spec[f] += w_[k][f] * x_hist_[k][f];
  }
  std::vector<double> y_full(static_cast<size_t>(fft_size_));
  fft_.Inverse(y_spec.data(), y_full.data());

  AecBlock out;
  out.y.assign(y_full.begin() + n, y_full.end());
  out.e.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.e[i] = d[i] - out.y[i];

  // Smoothed far-end power across partitions (per bin).
  std::vector<double> inst(static_cast<size_t>(bins_), 0.0);
  for (int k = 0; k < k_parts; ++k) {
    for (int f = 0; f < bins_; ++f) inst[f] += std::norm(x_hist_[k][f]);
  }
  if (!power_primed_) {
    power_ = inst;
    power_primed_ = true;
  } else {
    const double a = cfg_.power_smoothing;
    for (int f = 0; f < bins_; ++f) power_[f] = a * power_[f] + (1.0 - a) * inst[f];
  }

  if (PowerToDb(SignalPower(x)) < cfg_.freeze_below_dbfs) {
    return out;  // far end effectively silent; adapting would only drift
  }

  // NLMS update with per-partition gradient constraint.
  std::vector<std::complex<double>> e_spec(static_cast<size_t>(bins_));
  std::vector<double> e_pad(static_cast<size_t>(fft_size_), 0.0);
  std::copy(out.e.begin(), out.e.end(), e_pad.begin() + n);
  fft_.Forward(e_pad.data(), e_spec.data());

  std::vector<std::complex<double>> grad(static_cast<size_t>(bins_));
  std::vector<double> g_time(static_cast<size_t>(fft_size_));
  for (int k = 0; k < k_parts; ++k) {
    for (int f = 0; f < bins_; ++f) {
      grad[f] = cfg_.mu * std::conj(x_hist_[k][f]) * e_spec[f] /
                (power_[f] + cfg_.delta);
    }
    // Constrain: the last half of the time response must stay zero or the
    // circular update leaks across blocks.
    fft_.Inverse(grad.data(), g_time.data());
    std::fill(g_time.begin() + n, g_time.end(), 0.0);
    fft_.Forward(g_time.data(), grad.data());
    for (int f = 0; f < bins_; ++f) w_[k][f] += grad[f];
  }
  return out;
}

std::pair<AudioBuffer, AudioBuffer> MdfFilter::ProcessSignal(
    const AudioBuffer& x, const AudioBuffer& d) {
  if (x.sample_rate != d.sample_rate) {
    throw ConfigError("MdfFilter: sample rates differ");
  }
  if (x.NumSamples() != d.NumSamples()) {
    throw ShapeError("MdfFilter: signal lengths differ");
  }
  const int n = cfg_.block;
  const int total = x.NumSamples();
  AudioBuffer e_out, y_out;
  e_out.sample_rate = y_out.sample_rate = x.sample_rate;
  e_out.samples.reserve(static_cast<size_t>(total));
  y_out.samples.reserve(static_cast<size_t>(total));

  std::vector<double> xb(static_cast<size_t>(n));
  std::vector<double> db(static_cast<size_t>(n));
  for (int start = 0; start < total; start += n) {
    const int len = std::min(n, total - start);
    std::fill(xb.begin(), xb.end(), 0.0);
    std::fill(db.begin(), db.end(), 0.0);
    std::copy(x.samples.begin() + start, x.samples.begin() + start + len,
              xb.begin());
    std::copy(d.samples.begin() + start, d.samples.begin() + start + len,
              db.begin());
    AecBlock blk = ProcessBlock(xb, db);
    e_out.samples.insert(e_out.samples.end(), blk.e.begin(),
                         blk.e.begin() + len);
    y_out.samples.insert(y_out.samples.end(), blk.y.begin(),
                         blk.y.begin() + len);
  }
  return {std::move(e_out), std::move(y_out)};
}

std::vector<double> MdfFilter::PartitionTaps(int k) const {
  if (k < 0 || k >= cfg_.NumPartitions()) {
    throw ShapeError("MdfFilter: partition index out of range");
  }
  std::vector<double> t(static_cast<size_t>(fft_size_));
  fft_.Inverse(w_[k].data(), t.data());
  t.resize(static_cast<size_t>(cfg_.block));
  return t;
}

}  // namespace fbaec
