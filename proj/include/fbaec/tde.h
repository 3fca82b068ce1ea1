// include/fbaec/tde.h

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

#ifndef FBAEC_TDE_H_
#define FBAEC_TDE_H_

#include <complex>
#include <vector>

#include "fbaec/common.h"

namespace fbaec {

struct DelayEstimate {
  int delay = 0;           // samples; reference lags microphone
  double confidence = 0.0; // top peak / second peak; >= 1 when a peak exists
  bool Reliable(double threshold = 2.0) const {
    return confidence >= threshold;
  }
};

struct TdeConfig {
  int block = 4096;
  int fft_size = 8192;       // zero-padded to avoid circular wrap
  int max_delay = 16000;     // 1 s at 16 kHz
  double smoothing = 0.9;    // cross-spectrum exponential average per block
  double confidence_threshold = 2.0;
};

// Unit-magnitude (PHAT) cross spectrum of one block pair:
//   D(f) conj(X(f)) / max(|D(f) conj(X(f))|, eps),
// oriented so d = x delayed by k shows phase -2*pi*f*k/N and the inverse
// transform peaks at lag +k.  An all-zero block yields an all-zero spectrum
// with *flagged set, so the caller can exclude it from accumulation.
std::vector<std::complex<double>> GccPhatCrossSpectrum(
    const std::vector<double>& x_block, const std::vector<double>& d_block,
    int fft_size, bool* flagged = nullptr);

// GCC-PHAT delay estimation between far-end reference x and microphone d.
//
// Per-bank design: cross spectra are accumulated (exponential average) over
// successive 4096-sample block pairs at a set of coarse reference offsets
// (multiples of the block size), then inverse-transformed; delays beyond one
// FFT of lag are resolved by combining the coarse offset with the in-bank
// correlation peak.  Only nonnegative delays are searched.
DelayEstimate EstimateDelay(const AudioBuffer& x, const AudioBuffer& d,
                            const TdeConfig& cfg = TdeConfig());

// Applies the estimate: delays x by est.delay samples (zero head padding)
// and pads/crops to out_len so the aligned reference is time-synchronous
// with the microphone signal.
AudioBuffer Align(const AudioBuffer& x, const DelayEstimate& est, int out_len);

}  // namespace fbaec

#endif  // FBAEC_TDE_H_
