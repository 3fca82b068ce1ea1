// include/fbaec/subband.h

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

#ifndef FBAEC_SUBBAND_H_
#define FBAEC_SUBBAND_H_

#include <array>
#include <string>
#include <vector>

#include "fbaec/stft.h"

namespace fbaec {

// 3-band FIR filter bank with cosine (DCT) modulation.  A 48 kHz signal is
// decomposed into three 8 kHz-wide bands, each critically decimated to a
// 16 kHz sample rate: band 0 carries 0-8 kHz (the wide band the AEC chain
// processes), bands 1 and 2 carry 8-16 kHz and 16-24 kHz.
//
// The lowpass prototype is a Kaiser-windowed sinc whose cutoff is tuned so
// the response crosses -3 dB at the band edge pi/6; analysis and synthesis
// filters add the usual +-pi/4 phase pair so adjacent-band aliasing cancels
// in the cascade.  Design is pure; the filters are immutable after Design().
class FilterBank {
 public:
  static constexpr int kNumBands = 3;
  static constexpr int kDecimation = 3;

  // taps_per_band must be even and >= 32; the prototype has
  // 3 * taps_per_band taps (96 at the default).
  static FilterBank Design(int taps_per_band = 32, double kaiser_beta = 9.0);

  int num_taps() const { return static_cast<int>(prototype_.size()); }
  int taps_per_band() const { return taps_per_band_; }
  // Analysis+synthesis cascade delay in 48 kHz samples.
  int GroupDelay() const { return num_taps() - 1; }

  const std::vector<double>& prototype() const { return prototype_; }
  const std::vector<double>& analysis(int band) const {
    return analysis_[band];
  }
  const std::vector<double>& synthesis(int band) const {
    return synthesis_[band];
  }

  // Dumps prototype, analysis and synthesis taps as little-endian float-32
  // for offline inspection.
  void ExportTaps(const std::string& path) const;

 private:
  FilterBank() = default;
  int taps_per_band_ = 0;
  std::vector<double> prototype_;
  std::array<std::vector<double>, kNumBands> analysis_;
  std::array<std::vector<double>, kNumBands> synthesis_;
};

// Subband-domain view of a 48 kHz signal: the wide band as a 16 kHz
// AudioBuffer plus the two high bands kept in the filter bank's subband
// domain for later synthesis.
struct SubbandSignal {
  AudioBuffer wide;                          // 16 kHz, band 0
  std::array<std::vector<double>, 2> high;   // bands 1 and 2, 16 kHz rate
  int full_length = 0;                       // original 48 kHz sample count
};

// Frequency-bin ranges for the high-band gain numerator/denominator sums.
// Indices are 1-based inclusive, DC bin = 1; the defaults cover 0.5-4 kHz
// and 6-8 kHz at the 161-bin layout.
struct GainBandConfig {
  int a = 11;
  int b = 81;
  int c = 121;
  int d = 161;
  void Validate(int num_bins) const;
};

// Per-frame gain applied to the high bands at synthesis, in [0, g_max].
struct GainTrack {
  std::vector<double> g;
};

// Analysis: filters and decimates a 48 kHz buffer into the three bands.
// Rejects other sample rates.
SubbandSignal Split(const AudioBuffer& full, const FilterBank& fb);

// Frame-wise high-band gain: for each frame the minimum over the two bin
// ranges of sum|S_hat| / sum|D|, clamped to [0, g_max].  Frames where both
// denominator sums fall below eps get gain 0 (silence convention).
GainTrack HighBandGain(const Spectrogram& s_hat, const Spectrogram& d,
                       const GainBandConfig& cfg, double g_max = 1.0,
                       double eps = 1e-8);

// Synthesis: the wide band is replaced by Istft(s_hat); the high bands are
// scaled sample-and-hold per 10 ms hop by g and the three bands are
// interpolated, filtered and summed back to 48 kHz.  Output length equals
// sub.full_length; content is delayed by fb.GroupDelay() samples.
AudioBuffer Synthesize(const Spectrogram& s_hat, const SubbandSignal& sub,
                       const GainTrack& g, const FilterBank& fb,
                       const StftConfig& stft_cfg);

}  // namespace fbaec

#endif  // FBAEC_SUBBAND_H_
