// src/stft.cc

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

#include "fbaec/stft.h"

#include <cmath>
#include <numbers>

#include "fbaec/fft.h"

namespace fbaec {

void StftConfig::Validate() const {
  if (win_length <= 0 || hop <= 0 || fft_size <= 0) {
    throw ConfigError("StftConfig: sizes must be positive");
  }
  if (!(hop <= win_length && win_length <= fft_size)) {
    throw ConfigError("StftConfig: need hop <= win_length <= fft_size");
  }
  // COLA check for the window pair: sum of squared analysis taps over all
  // hop shifts must be constant.
  std::vector<double> w = MakeWindow(*this);
  for (int n = 0; n < hop; ++n) {
    double acc = 0.0;
    for (int m = n; m < win_length; m += hop) acc += w[m] * w[m];
    if (std::abs(acc - 1.0) > 1e-9) {
      throw ConfigError("StftConfig: window pair violates COLA at this hop");
    }
  }
}

std::vector<double> MakeWindow(const StftConfig& cfg) {
  std::vector<double> w(static_cast<size_t>(cfg.win_length));
  switch (cfg.window) {
    case WindowType::kSqrtHannPeriodic:
      for (int n = 0; n < cfg.win_length; ++n) {
        double hann =
            0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / cfg.win_length);
        w[n] = std::sqrt(hann);
      }
      break;
  }
  return w;
}

int NumStftFrames(int num_samples, const StftConfig& cfg) {
  if (num_samples < cfg.win_length) return 0;
  return (num_samples - cfg.win_length) / cfg.hop + 1;
}

Spectrogram Stft(const AudioBuffer& buf, const StftConfig& cfg) {
  cfg.Validate();
  if (buf.sample_rate != 16000) {
    throw ConfigError("Stft: expected a 16 kHz buffer, got " +
                      std::to_string(buf.sample_rate) + " Hz");
  }
  const int T = NumStftFrames(buf.NumSamples(), cfg);
  if (T == 0) {
    throw ShapeError("Stft: buffer shorter than one analysis window");
  }
  const std::vector<double> w = MakeWindow(cfg);
  RealFft fft(cfg.fft_size);
  std::vector<double> frame(static_cast<size_t>(cfg.fft_size), 0.0);

  Spectrogram out(T, cfg.num_bins());
  for (int t = 0; t < T; ++t) {
    const double* src = buf.samples.data() + static_cast<size_t>(t) * cfg.hop;
    for (int n = 0; n < cfg.win_length; ++n) frame[n] = src[n] * w[n];
    for (int n = cfg.win_length; n < cfg.fft_size; ++n) frame[n] = 0.0;
    fft.Forward(frame.data(), &out.at(t, 0));
  }
  return out;
}

AudioBuffer Istft(const Spectrogram& spec, const StftConfig& cfg) {
  cfg.Validate();
  if (spec.num_bins != cfg.num_bins()) {
    throw ShapeError("Istft: spectrogram has " + std::to_string(spec.num_bins) +
                     " bins, config expects " + std::to_string(cfg.num_bins()));
  }
  const std::vector<double> w = MakeWindow(cfg);
  RealFft fft(cfg.fft_size);
  const int T = spec.num_frames;
  const int out_len = T > 0 ? (T - 1) * cfg.hop + cfg.win_length : 0;

  AudioBuffer out;
  out.sample_rate = 16000;
  out.samples.assign(static_cast<size_t>(out_len), 0.0);
  std::vector<double> frame(static_cast<size_t>(cfg.fft_size));
  for (int t = 0; t < T; ++t) {
    fft.Inverse(&spec.at(t, 0), frame.data());
    double* dst = out.samples.data() + static_cast<size_t>(t) * cfg.hop;
    for (int n = 0; n < cfg.win_length; ++n) dst[n] += frame[n] * w[n];
  }
  return out;
}

Spectrogram CompressSpectrum(const Spectrogram& spec, double p) {
  if (!(p > 0.0)) {
    throw ConfigError("CompressSpectrum: exponent must be positive");
  }
  Spectrogram out(spec.num_frames, spec.num_bins);
  for (size_t i = 0; i < spec.data.size(); ++i) {
    const std::complex<double> z = spec.data[i];
    const double mag = std::abs(z);
    out.data[i] = mag > 0.0 ? std::pow(mag, p) * (z / mag)
                            : std::complex<double>(0.0, 0.0);
  }
  return out;
}

}  // namespace fbaec
