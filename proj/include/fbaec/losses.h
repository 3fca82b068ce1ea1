// include/fbaec/losses.h

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

// Evaluation-side objective functions: power-law compressed phase-aware
// losses, echo-weighted variants, energy-threshold VAD labels, and the
// VAD-gated mask loss.  Pure functions; no gradients.

#ifndef FBAEC_LOSSES_H_
#define FBAEC_LOSSES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbaec/common.h"
#include "fbaec/stft.h"

namespace fbaec {

// Real-valued T x F grid, row-major like Spectrogram.
struct LossGrid {
  int num_frames = 0;
  int num_bins = 0;
  std::vector<double> data;

  LossGrid() = default;
  LossGrid(int frames, int bins)
      : num_frames(frames),
        num_bins(bins),
        data(static_cast<size_t>(frames) * bins, 0.0) {}

  double& at(int t, int f) { return data[static_cast<size_t>(t) * num_bins + f]; }
  double at(int t, int f) const {
    return data[static_cast<size_t>(t) * num_bins + f];
  }
  double Mean() const;
};

struct PlcpaGrids {
  LossGrid l_mag;  // (|S|^p - |S_hat|^p)^2
  LossGrid l_pha;  // | |S|^p e^{j phi_S} - |S_hat|^p e^{j phi_S_hat} |^2
};

// Per-bin amplitude and phase-aware losses on compressed magnitudes.
// p in (0, 1].
PlcpaGrids Plcpa(const Spectrogram& s, const Spectrogram& s_hat,
                 double p = 0.5);

// W_echo = |Z|^2 / (|Z|^2 + |S|^2); both-zero bins map to 0.
LossGrid EchoWeight(const Spectrogram& z, const Spectrogram& s);

// mean over T,F of [ L_mag * (1 + W_echo) + L_pha ].
double LossEcho(const Spectrogram& s, const Spectrogram& s_hat,
                const Spectrogram& z, double p = 0.5);

struct VadLabelConfig {
  // Frame active iff energy is within relative_floor_db of the utterance
  // peak frame AND above absolute_floor_dbfs.
  double relative_floor_db = -40.0;
  double absolute_floor_dbfs = -70.0;
  StftConfig framing;
};

// Binary near-end activity per analysis frame.
std::vector<int> VadLabels(const AudioBuffer& s, const VadLabelConfig& cfg);

// Per-frame 2-class logits (index 1 = speech active).
using VadLogits = std::vector<std::array<double, 2>>;

// Mean cross-entropy of softmax(logits) against binary labels.
double LossVad(const VadLogits& logits, const std::vector<int>& labels);

// softmax((logits + g)/temperature) with g ~ Gumbel(0,1) drawn from the
// seeded generator, or g = 0 when noise_seed is empty (deterministic mode).
std::array<double, 2> GumbelSoftmax(const std::array<double, 2>& logits,
                                    double temperature,
                                    std::optional<uint32_t> noise_seed);

// W_vad(t) = GS(P_t) . [0,1]^T (deterministic, temperature 1);
// loss = mean over T,F of (|S|^p - |S_hat|^p * W_vad(t))^2.
double LossMask(const Spectrogram& s, const Spectrogram& s_hat,
                const VadLogits& logits, double p = 0.5);

double LossFinal(double l_echo, double l_mask, double l_vad);

struct LossReport {
  double l_mag = 0.0;
  double l_pha = 0.0;
  double l_vad = 0.0;
  double l_echo = 0.0;
  double l_mask = 0.0;
  double l_final = 0.0;

  // Single-line key=value record for CLI output.
  std::string ToLine() const;
};

// Computes every loss scalar in one pass.  Labels must match the framing of
// the spectrograms.
LossReport EvaluateLosses(const Spectrogram& s, const Spectrogram& s_hat,
                          const Spectrogram& z, const VadLogits& logits,
                          const std::vector<int>& labels, double p = 0.5);

}  // namespace fbaec

#endif  // FBAEC_LOSSES_H_
