// include/fbaec/simulate.h

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

// Mixture generation for the SER/SNR evaluation grid: d(n) = s(n) + z(n) +
// v(n) with all ground-truth components retained.

#ifndef FBAEC_SIMULATE_H_
#define FBAEC_SIMULATE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fbaec/common.h"

namespace fbaec {

enum class Scenario {
  kDoubleTalk,   // near end + echo (+ optional noise)
  kNearEndOnly,  // no echo
  kFarEndOnly,   // echo only; near end and noise muted
};

std::string ScenarioName(Scenario s);

struct MixSpec {
  double ser_db = 0.0;  // +inf = no echo
  double snr_db = 0.0;  // +inf = no noise
  bool nonlinear = false;
  uint32_t seed = 0;
  Scenario scenario = Scenario::kDoubleTalk;
  std::string name;

  void Validate() const;
};

// The 4 SER x 2 SNR evaluation grid: 6 double-talk conditions, 2 near-end
// single-talk, 3 far-end single-talk (echo gain set from the nominal SER
// against the reference near end).  11 entries.
std::vector<MixSpec> DefaultGrid(uint32_t base_seed, bool nonlinear = false);

struct MixtureRecord {
  AudioBuffer d, s, z, v, x;
  MixSpec spec;
  double realized_ser_db = 0.0;  // +-inf sentinels when a component is absent
  double realized_snr_db = 0.0;
};

// Test-grade echo path: unit direct tap followed by an exponentially
// decaying white-noise tail, total energy normalized to 1.  decay_ms is the
// 60 dB decay time of the tail envelope; 0 gives a single-tap identity path.
std::vector<double> SynthRir(double decay_ms, int length, int sample_rate,
                             uint32_t seed);

// z = rir * x, optionally with a memoryless hard clip at 0.8 full scale
// applied to x first (loudspeaker overdrive stand-in).
AudioBuffer RenderEcho(const AudioBuffer& x, const std::vector<double>& rir,
                       bool nonlinear);

// Scales z to the requested SER (measured over frames where the near-end
// activity label fires) and v to the requested SNR (whole chunk), then sums
// d = s + z + v.  Far-end-only specs use s only to set the echo gain and
// emit s = v = 0.  Throws ConfigError when a finite SER is requested against
// a silent near end.
MixtureRecord Mix(const AudioBuffer& s, const AudioBuffer& z,
                  const AudioBuffer& v, const MixSpec& spec);

// Realized speech-to-echo ratio under the simulation convention: powers
// summed over samples covered by at least one active near-end frame.
// Sentinels: no echo -> +inf; no active near end against echo -> -inf.
double MeasureSer(const AudioBuffer& s, const AudioBuffer& z);

// Realized speech-to-noise ratio over the whole chunk; same sentinels.
double MeasureSnr(const AudioBuffer& s, const AudioBuffer& v);

struct TestSetOptions {
  double chunk_seconds = 10.0;
  double rir_decay_ms = 100.0;
  int rir_length = 1600;
};

// Renders every grid condition from one near-end/far-end source pair into
// out_dir/<name>/{d,s,z,v,x}.wav plus a line-oriented manifest.  Returns the
// manifest path.  Deterministic for fixed seeds.
std::string BuildTestSet(const AudioBuffer& s_src, const AudioBuffer& x_src,
                         const std::vector<MixSpec>& grid,
                         const std::string& out_dir,
                         const TestSetOptions& opts = TestSetOptions());

// In-memory variant of the per-condition render used by BuildTestSet.
MixtureRecord RenderCondition(const AudioBuffer& s_src,
                              const AudioBuffer& x_src, const MixSpec& spec,
                              const TestSetOptions& opts);

// Deterministic speech-shaped test source: resonant noise bursts with
// pauses, peak-bounded.  No relation to real speech beyond envelope and
// coarse spectrum; good enough to exercise the activity labeler and mixers.
AudioBuffer SynthSpeechLike(double seconds, int sample_rate, uint32_t seed);

struct ManifestEntry {
  std::string name;
  std::string scenario;
  double ser_db = 0.0;
  double snr_db = 0.0;
  bool nonlinear = false;
  uint32_t seed = 0;
  double realized_ser_db = 0.0;
  double realized_snr_db = 0.0;
  // Paths relative to the manifest directory, order d, s, z, v, x.
  std::string d, s, z, v, x;
};

// Parses a manifest written by BuildTestSet.  Comment lines (#) skipped.
std::vector<ManifestEntry> ReadManifest(const std::string& path);

}  // namespace fbaec

#endif  // FBAEC_SIMULATE_H_
