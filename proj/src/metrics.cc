// src/metrics.cc

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

#include "fbaec/metrics.h"

#include <cmath>

namespace fbaec {

ErleResult Erle(const AudioBuffer& d, const AudioBuffer& s_hat) {
  if (d.NumSamples() != s_hat.NumSamples()) {
    throw ShapeError("Erle: buffer lengths differ");
  }
  if (d.sample_rate != s_hat.sample_rate) {
    throw ConfigError("Erle: sample rates differ");
  }
  const double ed = SignalEnergy(d.samples);
  const double eo = SignalEnergy(s_hat.samples);
  ErleResult r;
  if (eo <= 0.0) {
    r.erle_db = kInfDb;
    r.valid = false;
    return r;
  }
  if (ed <= 0.0) {
    r.erle_db = -kInfDb;
    r.valid = false;
    return r;
  }
  r.erle_db = 10.0 * std::log10(ed / eo);
  r.valid = true;
  return r;
}

LevelReport MeasureLevels(const MixtureRecord& rec) {
  LevelReport out;
  out.ser_db = MeasureSer(rec.s, rec.z);
  out.snr_db = MeasureSnr(rec.s, rec.v);
  return out;
}

}  // namespace fbaec
