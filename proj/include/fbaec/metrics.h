// include/fbaec/metrics.h

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

#ifndef FBAEC_METRICS_H_
#define FBAEC_METRICS_H_

#include "fbaec/common.h"
#include "fbaec/simulate.h"

namespace fbaec {

struct ErleResult {
  double erle_db = 0.0;  // +inf sentinel when the output is silent
  bool valid = false;    // true iff both energies are positive
};

// Echo return loss enhancement over whole buffers:
// 10 log10( sum d^2 / sum s_hat^2 ).
ErleResult Erle(const AudioBuffer& d, const AudioBuffer& s_hat);

struct LevelReport {
  double ser_db = 0.0;
  double snr_db = 0.0;
};

// Recomputes realized SER/SNR from the retained ground-truth components,
// using the same conventions the mixer applied.
LevelReport MeasureLevels(const MixtureRecord& rec);

}  // namespace fbaec

#endif  // FBAEC_METRICS_H_
