// src/features.cc

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

#include "fbaec/features.h"

#include <array>

namespace fbaec {

std::string ComboName(SignalCombo combo) {
  switch (combo) {
    case SignalCombo::kDX:
      return "DX";
    case SignalCombo::kEX:
      return "EX";
    case SignalCombo::kDEY:
      return "DEY";
  }
  return "?";
}

SignalCombo ParseCombo(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
  if (s == "dx") return SignalCombo::kDX;
  if (s == "ex") return SignalCombo::kEX;
  if (s == "dey") return SignalCombo::kDEY;
  throw ConfigError("unknown signal combo: " + name);
}

FeatureTensor StackFeatures(SignalCombo combo, const Spectrogram* d,
                            const Spectrogram* e, const Spectrogram* x,
                            const Spectrogram* y) {
  std::array<const Spectrogram*, 3> sources{};
  int num_sources = 0;
  switch (combo) {
    case SignalCombo::kDX:
      sources = {d, x, nullptr};
      num_sources = 2;
      break;
    case SignalCombo::kEX:
      sources = {e, x, nullptr};
      num_sources = 2;
      break;
    case SignalCombo::kDEY:
      sources = {d, e, y};
      num_sources = 3;
      break;
  }
  for (int i = 0; i < num_sources; ++i) {
    if (sources[i] == nullptr) {
      throw ConfigError("StackFeatures: combo " + ComboName(combo) +
                        " is missing a required signal");
    }
  }
  const Spectrogram& ref = *sources[0];
  for (int i = 1; i < num_sources; ++i) {
    if (!ref.SameShape(*sources[i])) {
      throw ShapeError("StackFeatures: spectrogram shapes differ across " +
                       ComboName(combo) + " inputs");
    }
  }

  FeatureTensor out;
  out.combo = combo;
  out.channels = 2 * num_sources;
  out.num_frames = ref.num_frames;
  out.num_bins = ref.num_bins;
  out.data.resize(static_cast<size_t>(out.channels) * out.num_frames *
                  out.num_bins);
  for (int i = 0; i < num_sources; ++i) {
    const Spectrogram& s = *sources[i];
    for (int t = 0; t < out.num_frames; ++t) {
      for (int f = 0; f < out.num_bins; ++f) {
        out.at(2 * i, t, f) = static_cast<float>(s.at(t, f).real());
        out.at(2 * i + 1, t, f) = static_cast<float>(s.at(t, f).imag());
      }
    }
  }
  return out;
}

}  // namespace fbaec
