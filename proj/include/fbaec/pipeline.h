// include/fbaec/pipeline.h

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

// End-to-end echo canceller: split -> delay estimation -> linear AEC ->
// neural post-filter -> high-band gain -> synthesis.  Offline (whole file),
// with a fixed documented output latency.

#ifndef FBAEC_PIPELINE_H_
#define FBAEC_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "fbaec/common.h"
#include "fbaec/features.h"
#include "fbaec/mdf.h"
#include "fbaec/net/gftnn.h"
#include "fbaec/stft.h"
#include "fbaec/subband.h"
#include "fbaec/tde.h"
#include "fbaec/wrls.h"

namespace fbaec {

enum class FilterKind { kNone, kMdf, kWrls };

std::string FilterKindName(FilterKind k);
FilterKind ParseFilterKind(const std::string& name);  // "none"|"mdf"|"wrls"

struct PipelineConfig {
  FilterKind filter = FilterKind::kMdf;
  bool tde_enabled = true;
  SignalCombo combo = SignalCombo::kDEY;
  std::string model_path;  // empty -> no post-filter (DSP-only / identity)
  bool subband = true;     // off -> 16 kHz wide-band passthrough mode
  int model_channels = 128;
  double compress_power = 0.5;

  StftConfig stft;
  MdfConfig mdf;
  WrlsConfig wrls;
  TdeConfig tde;
  GainBandConfig gain_band;

  // Enforces the combo/filter coupling: EX and DEY need e(n)/y(n), so a
  // linear filter must be enabled when a model is present; DX may run
  // filterless.
  void Validate() const;

  bool UsesModel() const { return !model_path.empty(); }
  ModelArch Arch() const;
};

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct RunReport {
  DelayEstimate delay;
  bool delay_applied = false;
  FilterKind filter = FilterKind::kNone;
  int wrls_reinits = 0;
  int output_delay_samples = 0;  // at the output rate
  double audio_seconds = 0.0;
  std::vector<StageTiming> stages;

  double TotalSeconds() const;
  double TotalRtf() const;  // processing time / audio time
  std::string ToText() const;
};

class Pipeline {
 public:
  // Loads the model eagerly when configured; ModelLoadError surfaces here.
  explicit Pipeline(const PipelineConfig& cfg);
  // Injects an already-built model (testing); arch must match the config.
  Pipeline(const PipelineConfig& cfg, GftnnModel model);

  // mic and ref must share the configured rate: 48 kHz with subband on,
  // 16 kHz with it off.  Output is at the input rate, same length, delayed
  // by window+hop (plus the filter bank group delay when subband is on).
  AudioBuffer Process(const AudioBuffer& mic, const AudioBuffer& ref,
                      RunReport* report = nullptr);

  const PipelineConfig& config() const { return cfg_; }
  int OutputDelaySamples() const;

 private:
  PipelineConfig cfg_;
  FilterBank fb_;
  std::optional<GftnnModel> model_;
};

}  // namespace fbaec

#endif  // FBAEC_PIPELINE_H_
