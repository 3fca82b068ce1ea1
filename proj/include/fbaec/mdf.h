// include/fbaec/mdf.h

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

// Multidelay block frequency-domain adaptive filter (partitioned NLMS with
// overlap-save convolution).  Reference: Soo & Pang, "Multidelay block
// frequency domain adaptive filter", IEEE TASSP 1990.

#ifndef FBAEC_MDF_H_
#define FBAEC_MDF_H_

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "fbaec/common.h"
#include "fbaec/fft.h"

namespace fbaec {

struct MdfConfig {
  int block = 320;          // samples per block (matches the STFT window)
  double tail_ms = 300.0;   // modeled echo tail; sets the partition count
  double mu = 0.5;          // NLMS step size
  double delta = 1e-6;      // power regularizer
  double power_smoothing = 0.8;
  double freeze_below_dbfs = -60.0;  // skip adaptation on silent far end
  int sample_rate = 16000;

  int NumPartitions() const;
  void Validate() const;
};

// Output of one block: echo estimate y and residual e = d - y.
struct AecBlock {
  std::vector<double> e;
  std::vector<double> y;
};

class MdfFilter {
 public:
  explicit MdfFilter(const MdfConfig& cfg = MdfConfig());

  // Consumes one far-end/mic block pair of exactly cfg.block samples.
  // Throws ProcessError on non-finite input; state is left untouched.
  AecBlock ProcessBlock(const std::vector<double>& x,
                        const std::vector<double>& d);

  // Convenience: run over whole signals.  The tail is zero-padded to a full
  // block internally; outputs are truncated back to the input length.
  // Returns (e, y).
  std::pair<AudioBuffer, AudioBuffer> ProcessSignal(const AudioBuffer& x,
                                                    const AudioBuffer& d);

  // Misalignment probe: current filter taps of partition k (time domain,
  // cfg.block coefficients).  Used by tests against a least-squares oracle.
  std::vector<double> PartitionTaps(int k) const;

  const MdfConfig& config() const { return cfg_; }
  void Reset();

 private:
  MdfConfig cfg_;
  int fft_size_;
  int bins_;
  mutable RealFft fft_;
  std::vector<std::vector<std::complex<double>>> x_hist_;  // newest first
  std::vector<std::vector<std::complex<double>>> w_;
  std::vector<double> x_prev_;   // previous input block (overlap-save)
  std::vector<double> power_;    // smoothed per-bin far-end power
  bool power_primed_ = false;
};

}  // namespace fbaec

#endif  // FBAEC_MDF_H_
