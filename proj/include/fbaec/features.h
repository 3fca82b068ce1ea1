// include/fbaec/features.h

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

#ifndef FBAEC_FEATURES_H_
#define FBAEC_FEATURES_H_

#include <string>
#include <vector>

#include "fbaec/stft.h"

namespace fbaec {

// Input-signal combination fed to the post-filter network.
enum class SignalCombo { kDX, kEX, kDEY };

std::string ComboName(SignalCombo combo);
SignalCombo ParseCombo(const std::string& name);  // "dx" | "ex" | "dey"

inline int ComboChannels(SignalCombo combo) {
  return combo == SignalCombo::kDEY ? 6 : 4;
}

// Real-valued C x T x F stack consumed by the network (float32, row-major
// with f fastest).
struct FeatureTensor {
  SignalCombo combo = SignalCombo::kDEY;
  int channels = 0;
  int num_frames = 0;
  int num_bins = 0;
  std::vector<float> data;

  float& at(int c, int t, int f) {
    return data[(static_cast<size_t>(c) * num_frames + t) * num_bins + f];
  }
  float at(int c, int t, int f) const {
    return data[(static_cast<size_t>(c) * num_frames + t) * num_bins + f];
  }
};

// Stacks real/imag channels in a fixed, documented order:
//   DEY -> [D_r, D_i, E_r, E_i, Y_r, Y_i]
//   DX  -> [D_r, D_i, X_r, X_i]
//   EX  -> [E_r, E_i, X_r, X_i]
// Unused signal arguments may be null; a missing required signal is a
// configuration error, mismatched shapes a shape error.
FeatureTensor StackFeatures(SignalCombo combo, const Spectrogram* d,
                            const Spectrogram* e, const Spectrogram* x,
                            const Spectrogram* y);

}  // namespace fbaec

#endif  // FBAEC_FEATURES_H_
