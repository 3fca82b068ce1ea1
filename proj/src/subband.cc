// src/subband.cc

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

#include "fbaec/subband.h"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

namespace fbaec {
namespace {

std::vector<double> KaiserWindow(int length, double beta) {
  std::vector<double> w(static_cast<size_t>(length));
  const double denom = std::cyl_bessel_i(0.0, beta);
  for (int n = 0; n < length; ++n) {
    double r = 2.0 * n / (length - 1) - 1.0;
    w[n] = std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - r * r)) / denom;
  }
  return w;
}

// Windowed sinc, unity DC gain.  fc in cycles/sample.
std::vector<double> WindowedSinc(double fc, int length, double beta) {
  std::vector<double> w = KaiserWindow(length, beta);
  std::vector<double> h(static_cast<size_t>(length));
  const double center = (length - 1) / 2.0;
  double sum = 0.0;
  for (int n = 0; n < length; ++n) {
    double t = n - center;
    double s = t == 0.0 ? 2.0 * fc
                        : std::sin(2.0 * std::numbers::pi * fc * t) /
                              (std::numbers::pi * t);
    h[n] = s * w[n];
    sum += h[n];
  }
  for (double& v : h) v /= sum;
  return h;
}

double MagnitudeAt(const std::vector<double>& h, double omega) {
  std::complex<double> acc(0.0, 0.0);
  for (size_t n = 0; n < h.size(); ++n) {
    acc += h[n] * std::exp(std::complex<double>(0.0, -omega * n));
  }
  return std::abs(acc);
}

// FIR filter then keep every third sample.
std::vector<double> FilterDecimate(const std::vector<double>& x,
                                   const std::vector<double>& h,
                                   int out_len) {
  const int n = static_cast<int>(x.size());
  const int taps = static_cast<int>(h.size());
  std::vector<double> out(static_cast<size_t>(out_len), 0.0);
  for (int m = 0; m < out_len; ++m) {
    const int i = 3 * m;
    double acc = 0.0;
    const int j0 = std::max(0, i - n + 1);
    const int j1 = std::min(taps - 1, i);
    for (int j = j0; j <= j1; ++j) acc += h[j] * x[i - j];
    out[m] = acc;
  }
  return out;
}

// Zero-stuff by 3, filter, scale by the decimation factor, accumulate.
void InterpolateAccumulate(const std::vector<double>& band,
                           const std::vector<double>& g,
                           std::vector<double>* out) {
  const int taps = static_cast<int>(g.size());
  const int out_len = static_cast<int>(out->size());
  const int blen = static_cast<int>(band.size());
  for (int i = 0; i < out_len; ++i) {
    // Only j with (i - j) divisible by 3 contribute.
    double acc = 0.0;
    int j = i % 3;
    for (; j < taps; j += 3) {
      int m = (i - j) / 3;
      if (m < 0) break;
      if (m < blen) acc += g[j] * band[m];
    }
    (*out)[i] += 3.0 * acc;
  }
}

int BandLength(int full_length, int taps) {
  return (full_length + taps - 1 + 2) / 3;
}

}  // namespace

FilterBank FilterBank::Design(int taps_per_band, double kaiser_beta) {
  if (taps_per_band < 32 || taps_per_band % 2 != 0) {
    throw ConfigError("FilterBank: taps_per_band must be even and >= 32");
  }
  const int length = kNumBands * taps_per_band;

  // Tune the cutoff so |H(pi/6)| = 1/sqrt(2): adjacent bands then cross at
  // -3 dB and their squared responses sum to ~1 through the transition.
  const double target = 1.0 / std::sqrt(2.0);
  const double omega_edge = std::numbers::pi / 6.0;
  double lo = 1.0 / 24.0, hi = 1.0 / 6.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    std::vector<double> h = WindowedSinc(mid, length, kaiser_beta);
    (MagnitudeAt(h, omega_edge) > target ? hi : lo) = mid;
  }

  FilterBank fb;
  fb.taps_per_band_ = taps_per_band;
  fb.prototype_ = WindowedSinc(0.5 * (lo + hi), length, kaiser_beta);

  const double center = (length - 1) / 2.0;
  for (int k = 0; k < kNumBands; ++k) {
    fb.analysis_[k].resize(static_cast<size_t>(length));
    fb.synthesis_[k].resize(static_cast<size_t>(length));
    const double wk = (2 * k + 1) * std::numbers::pi / (2.0 * kNumBands);
    const double phase = (k % 2 == 0 ? 1.0 : -1.0) * std::numbers::pi / 4.0;
    for (int n = 0; n < length; ++n) {
      const double arg = wk * (n - center);
      fb.analysis_[k][n] = 2.0 * fb.prototype_[n] * std::cos(arg + phase);
      fb.synthesis_[k][n] = 2.0 * fb.prototype_[n] * std::cos(arg - phase);
    }
  }
  return fb;
}

void FilterBank::ExportTaps(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("FilterBank::ExportTaps: cannot open " + path);
  auto dump = [&os](const std::vector<double>& v) {
    for (double x : v) {
      float f = static_cast<float>(x);
      os.write(reinterpret_cast<const char*>(&f), sizeof(float));
    }
  };
  dump(prototype_);
  for (const auto& h : analysis_) dump(h);
  for (const auto& g : synthesis_) dump(g);
}

void GainBandConfig::Validate(int num_bins) const {
  if (!(1 <= a && a < b && b <= num_bins && b < c && c < d && d <= num_bins)) {
    throw ConfigError("GainBandConfig: bin ranges out of order or range");
  }
}

SubbandSignal Split(const AudioBuffer& full, const FilterBank& fb) {
  if (full.sample_rate != 48000) {
    throw ConfigError("Split: expected 48 kHz input, got " +
                      std::to_string(full.sample_rate) + " Hz");
  }
  const int blen = BandLength(full.NumSamples(), fb.num_taps());
  SubbandSignal out;
  out.full_length = full.NumSamples();
  out.wide.sample_rate = 16000;
  out.wide.samples = FilterDecimate(full.samples, fb.analysis(0), blen);
  out.high[0] = FilterDecimate(full.samples, fb.analysis(1), blen);
  out.high[1] = FilterDecimate(full.samples, fb.analysis(2), blen);
  return out;
}

GainTrack HighBandGain(const Spectrogram& s_hat, const Spectrogram& d,
                       const GainBandConfig& cfg, double g_max, double eps) {
  if (!s_hat.SameShape(d)) {
    throw ShapeError("HighBandGain: S_hat and D shapes differ");
  }
  cfg.Validate(d.num_bins);

  GainTrack track;
  track.g.resize(static_cast<size_t>(s_hat.num_frames));
  for (int t = 0; t < s_hat.num_frames; ++t) {
    double num1 = 0.0, den1 = 0.0, num2 = 0.0, den2 = 0.0;
    for (int f = cfg.a - 1; f < cfg.b; ++f) {
      num1 += std::abs(s_hat.at(t, f));
      den1 += std::abs(d.at(t, f));
    }
    for (int f = cfg.c - 1; f < cfg.d; ++f) {
      num2 += std::abs(s_hat.at(t, f));
      den2 += std::abs(d.at(t, f));
    }
    double g;
    if (den1 < eps && den2 < eps) {
      g = 0.0;  // silent microphone frame
    } else {
      double r1 = den1 < eps ? g_max : num1 / den1;
      double r2 = den2 < eps ? g_max : num2 / den2;
      g = std::min(r1, r2);
    }
    track.g[t] = std::clamp(g, 0.0, g_max);
  }
  return track;
}

AudioBuffer Synthesize(const Spectrogram& s_hat, const SubbandSignal& sub,
                       const GainTrack& g, const FilterBank& fb,
                       const StftConfig& stft_cfg) {
  if (static_cast<int>(g.g.size()) != s_hat.num_frames) {
    throw ShapeError("Synthesize: gain track length != S_hat frames");
  }
  const int blen = static_cast<int>(sub.high[0].size());
  if (static_cast<int>(sub.high[1].size()) != blen) {
    throw ShapeError("Synthesize: high band lengths differ");
  }

  // New wide band from the processed spectrum, padded/trimmed to the
  // subband length.
  AudioBuffer wide = Istft(s_hat, stft_cfg);
  std::vector<double> band0(static_cast<size_t>(blen), 0.0);
  const int ncopy = std::min<int>(blen, wide.NumSamples());
  std::copy(wide.samples.begin(), wide.samples.begin() + ncopy, band0.begin());

  // High bands scaled sample-and-hold per hop-aligned frame.
  std::array<std::vector<double>, 2> high;
  const int hop = stft_cfg.hop;
  const int num_frames = s_hat.num_frames;
  for (int k = 0; k < 2; ++k) {
    high[k].resize(static_cast<size_t>(blen));
    for (int m = 0; m < blen; ++m) {
      int t = std::min(m / hop, num_frames - 1);
      high[k][m] = sub.high[k][m] * g.g[t];
    }
  }

  AudioBuffer out;
  out.sample_rate = 48000;
  out.samples.assign(static_cast<size_t>(sub.full_length), 0.0);
  InterpolateAccumulate(band0, fb.synthesis(0), &out.samples);
  InterpolateAccumulate(high[0], fb.synthesis(1), &out.samples);
  InterpolateAccumulate(high[1], fb.synthesis(2), &out.samples);
  return out;
}

}  // namespace fbaec
