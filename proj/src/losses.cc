// src/losses.cc

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

#include "fbaec/losses.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

namespace fbaec {
namespace {

void CheckShapes(const Spectrogram& a, const Spectrogram& b,
                 const char* where) {
  if (!a.SameShape(b)) {
    throw ShapeError(std::string(where) + ": spectrogram shapes differ");
  }
}

void CheckPower(double p, const char* where) {
  if (p <= 0.0 || p > 1.0) {
    throw ConfigError(std::string(where) + ": p must be in (0, 1]");
  }
}

}  // namespace

double LossGrid::Mean() const {
  if (data.empty()) return 0.0;
  double acc = 0.0;
  for (double v : data) acc += v;
  return acc / static_cast<double>(data.size());
}

PlcpaGrids Plcpa(const Spectrogram& s, const Spectrogram& s_hat, double p) {
  CheckShapes(s, s_hat, "Plcpa");
  CheckPower(p, "Plcpa");
  PlcpaGrids out;
  out.l_mag = LossGrid(s.num_frames, s.num_bins);
  out.l_pha = LossGrid(s.num_frames, s.num_bins);
  for (int t = 0; t < s.num_frames; ++t) {
    for (int f = 0; f < s.num_bins; ++f) {
      const std::complex<double>& a = s.at(t, f);
      const std::complex<double>& b = s_hat.at(t, f);
      double ma = std::pow(std::abs(a), p);
      double mb = std::pow(std::abs(b), p);
      double dm = ma - mb;
      out.l_mag.at(t, f) = dm * dm;
      std::complex<double> ca =
          std::abs(a) > 0.0 ? ma * (a / std::abs(a)) : std::complex<double>(0.0);
      std::complex<double> cb =
          std::abs(b) > 0.0 ? mb * (b / std::abs(b)) : std::complex<double>(0.0);
      out.l_pha.at(t, f) = std::norm(ca - cb);
    }
  }
  return out;
}

LossGrid EchoWeight(const Spectrogram& z, const Spectrogram& s) {
  CheckShapes(z, s, "EchoWeight");
  LossGrid w(z.num_frames, z.num_bins);
  for (int t = 0; t < z.num_frames; ++t) {
    for (int f = 0; f < z.num_bins; ++f) {
      double pz = std::norm(z.at(t, f));
      double ps = std::norm(s.at(t, f));
      double denom = pz + ps;
      w.at(t, f) = denom > 0.0 ? pz / denom : 0.0;
    }
  }
  return w;
}

double LossEcho(const Spectrogram& s, const Spectrogram& s_hat,
                const Spectrogram& z, double p) {
  CheckShapes(s, z, "LossEcho");
  PlcpaGrids g = Plcpa(s, s_hat, p);
  LossGrid w = EchoWeight(z, s);
  double acc = 0.0;
  const size_t n = g.l_mag.data.size();
  for (size_t i = 0; i < n; ++i) {
    acc += g.l_mag.data[i] * (1.0 + w.data[i]) + g.l_pha.data[i];
  }
  return n > 0 ? acc / static_cast<double>(n) : 0.0;
}

std::vector<int> VadLabels(const AudioBuffer& s, const VadLabelConfig& cfg) {
  cfg.framing.Validate();
  const int win = cfg.framing.win_length;
  const int hop = cfg.framing.hop;
  const int frames = NumStftFrames(s.NumSamples(), cfg.framing);
  std::vector<int> labels(static_cast<size_t>(std::max(frames, 0)), 0);
  if (frames <= 0) return labels;

  std::vector<double> energy_db(static_cast<size_t>(frames));
  double peak_db = -kInfDb;
  for (int t = 0; t < frames; ++t) {
    double acc = 0.0;
    const double* frame = s.samples.data() + static_cast<size_t>(t) * hop;
    for (int i = 0; i < win; ++i) acc += frame[i] * frame[i];
    energy_db[t] = PowerToDb(acc / win);
    peak_db = std::max(peak_db, energy_db[t]);
  }
  for (int t = 0; t < frames; ++t) {
    labels[t] = (energy_db[t] > peak_db + cfg.relative_floor_db &&
                 energy_db[t] > cfg.absolute_floor_dbfs)
                    ? 1
                    : 0;
  }
  return labels;
}

double LossVad(const VadLogits& logits, const std::vector<int>& labels) {
  if (logits.size() != labels.size()) {
    throw ShapeError("LossVad: logit/label lengths differ");
  }
  if (logits.empty()) return 0.0;
  double acc = 0.0;
  for (size_t t = 0; t < logits.size(); ++t) {
    if (labels[t] != 0 && labels[t] != 1) {
      throw ConfigError("LossVad: labels must be binary");
    }
    double a = logits[t][0];
    double b = logits[t][1];
    double m = std::max(a, b);
    double logsum = m + std::log(std::exp(a - m) + std::exp(b - m));
    acc += logsum - logits[t][static_cast<size_t>(labels[t])];
  }
  return acc / static_cast<double>(logits.size());
}

std::array<double, 2> GumbelSoftmax(const std::array<double, 2>& logits,
                                    double temperature,
                                    std::optional<uint32_t> noise_seed) {
  if (temperature <= 0.0) {
    throw ConfigError("GumbelSoftmax: temperature must be positive");
  }
  std::array<double, 2> z = logits;
  if (noise_seed.has_value()) {
    std::mt19937 rng(*noise_seed);
    std::uniform_real_distribution<double> unif(
        std::numeric_limits<double>::min(), 1.0);
    for (double& v : z) v += -std::log(-std::log(unif(rng)));
  }
  double a = z[0] / temperature;
  double b = z[1] / temperature;
  double m = std::max(a, b);
  double ea = std::exp(a - m);
  double eb = std::exp(b - m);
  return {ea / (ea + eb), eb / (ea + eb)};
}

double LossMask(const Spectrogram& s, const Spectrogram& s_hat,
                const VadLogits& logits, double p) {
  CheckShapes(s, s_hat, "LossMask");
  CheckPower(p, "LossMask");
  if (static_cast<int>(logits.size()) != s.num_frames) {
    throw ShapeError("LossMask: logit count does not match frames");
  }
  if (s.num_frames == 0 || s.num_bins == 0) return 0.0;
  double acc = 0.0;
  for (int t = 0; t < s.num_frames; ++t) {
    // W_fix = [0, 1]: the gate is the speech-class probability.
    double w_vad = GumbelSoftmax(logits[static_cast<size_t>(t)], 1.0,
                                 std::nullopt)[1];
    for (int f = 0; f < s.num_bins; ++f) {
      double ms = std::pow(std::abs(s.at(t, f)), p);
      double mh = std::pow(std::abs(s_hat.at(t, f)), p);
      double d = ms - mh * w_vad;
      acc += d * d;
    }
  }
  return acc / (static_cast<double>(s.num_frames) * s.num_bins);
}

double LossFinal(double l_echo, double l_mask, double l_vad) {
  return l_echo + 0.2 * l_mask + 0.1 * l_vad;
}

std::string LossReport::ToLine() const {
  std::ostringstream os;
  os.precision(9);
  os << "l_mag=" << l_mag << " l_pha=" << l_pha << " l_vad=" << l_vad
     << " l_echo=" << l_echo << " l_mask=" << l_mask << " l_final=" << l_final;
  return os.str();
}

LossReport EvaluateLosses(const Spectrogram& s, const Spectrogram& s_hat,
                          const Spectrogram& z, const VadLogits& logits,
                          const std::vector<int>& labels, double p) {
  LossReport r;
  PlcpaGrids g = Plcpa(s, s_hat, p);
  r.l_mag = g.l_mag.Mean();
  r.l_pha = g.l_pha.Mean();
  r.l_echo = LossEcho(s, s_hat, z, p);
  r.l_mask = LossMask(s, s_hat, logits, p);
  r.l_vad = LossVad(logits, labels);
  r.l_final = LossFinal(r.l_echo, r.l_mask, r.l_vad);
  return r;
}

}  // namespace fbaec
