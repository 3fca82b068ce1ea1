// include/fbaec/stft.h

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

#ifndef FBAEC_STFT_H_
#define FBAEC_STFT_H_

#include <complex>
#include <vector>

#include "fbaec/common.h"

namespace fbaec {

enum class WindowType {
  // Periodic square-root Hann on both analysis and synthesis; the product
  // pair satisfies constant overlap-add at 50% hop.
  kSqrtHannPeriodic,
};

struct StftConfig {
  int win_length = 320;
  int hop = 160;
  int fft_size = 320;
  WindowType window = WindowType::kSqrtHannPeriodic;

  int num_bins() const { return fft_size / 2 + 1; }
  // Throws ConfigError if hop/win/fft relations or the COLA condition are
  // violated.
  void Validate() const;
};

// Complex T x F frame/bin matrix, time-major with the DC bin first.
struct Spectrogram {
  int num_frames = 0;
  int num_bins = 0;
  std::vector<std::complex<double>> data;  // row-major: frame t, then bin f

  Spectrogram() = default;
  Spectrogram(int frames, int bins)
      : num_frames(frames),
        num_bins(bins),
        data(static_cast<size_t>(frames) * bins) {}

  std::complex<double>& at(int t, int f) {
    return data[static_cast<size_t>(t) * num_bins + f];
  }
  const std::complex<double>& at(int t, int f) const {
    return data[static_cast<size_t>(t) * num_bins + f];
  }
  bool SameShape(const Spectrogram& o) const {
    return num_frames == o.num_frames && num_bins == o.num_bins;
  }
};

// Analysis (or synthesis; they are equal for the sqrt-Hann pair) window taps.
std::vector<double> MakeWindow(const StftConfig& cfg);

// Number of analysis frames for a buffer of the given length; frames are
// taken without head zero-padding: T = floor((len - win) / hop) + 1.
int NumStftFrames(int num_samples, const StftConfig& cfg);

// Windowed real FFT per frame.  Requires at least one full window of input
// at 16 kHz.
Spectrogram Stft(const AudioBuffer& buf, const StftConfig& cfg);

// Overlap-add reconstruction with the synthesis window.  No edge
// renormalization: the COLA pair reconstructs the fully-overlapped interior
// exactly; head/tail frames remain tapered.
AudioBuffer Istft(const Spectrogram& spec, const StftConfig& cfg);

// Power-law compression |z|^p * e^{j arg z}.  p in (0, 1]; zero magnitude
// maps to zero.  Decompression is the same call with exponent 1/p.
Spectrogram CompressSpectrum(const Spectrogram& spec, double p);

}  // namespace fbaec

#endif  // FBAEC_STFT_H_
