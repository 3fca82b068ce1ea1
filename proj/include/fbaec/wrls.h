// include/fbaec/wrls.h

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

// Weighted recursive least squares echo canceller operating per STFT bin.
// Each bin carries an L-frame far-end history (a convolutive transfer
// function model) with exponential forgetting.

#ifndef FBAEC_WRLS_H_
#define FBAEC_WRLS_H_

#include <complex>
#include <utility>
#include <vector>

#include "fbaec/common.h"
#include "fbaec/stft.h"

namespace fbaec {

struct WrlsConfig {
  int history = 10;          // far-end frames per bin (filter order L)
  double lambda = 0.999;     // forgetting factor
  double delta_init = 1e-3;  // inverse-covariance init: P0 = (1/delta_init) I

  void Validate() const;
};

class WrlsFilter {
 public:
  WrlsFilter(int num_bins, const WrlsConfig& cfg = WrlsConfig());

  // One STFT frame across all bins.  Rows are num_bins() long; e and y are
  // written in place.  Throws ProcessError on non-finite input, leaving the
  // state untouched.
  void ProcessFrame(const std::complex<double>* x_row,
                    const std::complex<double>* d_row,
                    std::complex<double>* e_row, std::complex<double>* y_row);

  // Whole-spectrogram convenience.  Returns (E, Y).
  std::pair<Spectrogram, Spectrogram> Process(const Spectrogram& x,
                                              const Spectrogram& d);

  // Current per-bin weight vector (newest frame first); for test probes.
  std::vector<std::complex<double>> BinWeights(int f) const;

  int num_bins() const { return num_bins_; }
  // Times any bin's inverse covariance lost positive definiteness and was
  // reinitialized.
  int reinit_count() const { return reinit_count_; }
  const WrlsConfig& config() const { return cfg_; }
  void Reset();

 private:
  struct BinState;

  WrlsConfig cfg_;
  int num_bins_;
  int reinit_count_ = 0;
  std::vector<BinState> bins_;
};

struct WrlsFilter::BinState {
  std::vector<std::complex<double>> x;  // history, newest first
  std::vector<std::complex<double>> w;
  std::vector<std::complex<double>> p;  // L x L inverse covariance, row-major
};

}  // namespace fbaec

#endif  // FBAEC_WRLS_H_
