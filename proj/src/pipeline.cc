// src/pipeline.cc

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

#include "fbaec/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <utility>

namespace fbaec {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

AudioBuffer CropTo(const AudioBuffer& in, int num_samples) {
  AudioBuffer out;
  out.sample_rate = in.sample_rate;
  out.samples.assign(static_cast<size_t>(num_samples), 0.0);
  const int n = std::min(num_samples, in.NumSamples());
  std::copy(in.samples.begin(), in.samples.begin() + n, out.samples.begin());
  return out;
}

// Shifts content later by `delay` samples, keeping the buffer length.
AudioBuffer DelayBy(const AudioBuffer& in, int delay) {
  AudioBuffer out;
  out.sample_rate = in.sample_rate;
  out.samples.assign(in.samples.size(), 0.0);
  for (size_t i = static_cast<size_t>(delay); i < out.samples.size(); ++i) {
    out.samples[i] = in.samples[i - delay];
  }
  return out;
}

}  // namespace

std::string FilterKindName(FilterKind k) {
  switch (k) {
    case FilterKind::kNone:
      return "none";
    case FilterKind::kMdf:
      return "mdf";
    case FilterKind::kWrls:
      return "wrls";
  }
  return "unknown";
}

FilterKind ParseFilterKind(const std::string& name) {
  if (name == "none") return FilterKind::kNone;
  if (name == "mdf") return FilterKind::kMdf;
  if (name == "wrls") return FilterKind::kWrls;
  throw ConfigError("unknown filter kind: " + name);
}

void PipelineConfig::Validate() const {
  stft.Validate();
  mdf.Validate();
  wrls.Validate();
  gain_band.Validate(stft.num_bins());
  if (model_channels <= 0) {
    throw ConfigError("PipelineConfig: model_channels must be positive");
  }
  if (!(compress_power > 0.0 && compress_power <= 1.0)) {
    throw ConfigError("PipelineConfig: compress_power must be in (0, 1]");
  }
  if (UsesModel() && combo != SignalCombo::kDX &&
      filter == FilterKind::kNone) {
    throw ConfigError(
        "PipelineConfig: combo " + ComboName(combo) +
        " needs e(n)/y(n); enable a linear filter or use the dx combo");
  }
}

ModelArch PipelineConfig::Arch() const {
  ModelArch arch;
  arch.channels = model_channels;
  arch.input_channels = ComboChannels(combo);
  arch.fft_bins = stft.num_bins();
  return arch;
}

double RunReport::TotalSeconds() const {
  double acc = 0.0;
  for (const StageTiming& s : stages) acc += s.seconds;
  return acc;
}

double RunReport::TotalRtf() const {
  return audio_seconds > 0.0 ? TotalSeconds() / audio_seconds : 0.0;
}

std::string RunReport::ToText() const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << "filter=" << FilterKindName(filter) << " delay=" << delay.delay
     << " confidence=" << delay.confidence
     << " applied=" << (delay_applied ? 1 : 0)
     << " output_delay=" << output_delay_samples;
  if (filter == FilterKind::kWrls) os << " wrls_reinits=" << wrls_reinits;
  os << '\n';
  for (const StageTiming& s : stages) {
    os << "  " << s.name << ": " << s.seconds << " s";
    if (audio_seconds > 0.0) os << " (rtf " << s.seconds / audio_seconds << ")";
    os << '\n';
  }
  os << "  total: " << TotalSeconds() << " s (rtf " << TotalRtf() << ")\n";
  return os.str();
}

Pipeline::Pipeline(const PipelineConfig& cfg)
    : cfg_(cfg), fb_(FilterBank::Design()) {
  cfg_.Validate();
  if (cfg_.UsesModel()) {
    model_ = GftnnModel::LoadFromFile(cfg_.Arch(), cfg_.model_path);
  }
}

Pipeline::Pipeline(const PipelineConfig& cfg, GftnnModel model)
    : cfg_(cfg), fb_(FilterBank::Design()), model_(std::move(model)) {
  cfg_.Validate();
  const ModelArch want = cfg_.Arch();
  const ModelArch& got = model_->arch();
  if (got.channels != want.channels ||
      got.input_channels != want.input_channels ||
      got.fft_bins != want.fft_bins) {
    throw ModelLoadError("Pipeline: injected model arch mismatch");
  }
}

int Pipeline::OutputDelaySamples() const {
  const int base = cfg_.stft.win_length + cfg_.stft.hop;
  return cfg_.subband ? base * 3 + fb_.GroupDelay() : base;
}

AudioBuffer Pipeline::Process(const AudioBuffer& mic, const AudioBuffer& ref,
                              RunReport* report) {
  ValidateAudio(mic, "Pipeline mic");
  ValidateAudio(ref, "Pipeline ref");
  if (mic.sample_rate != ref.sample_rate) {
    throw ConfigError("Pipeline: mic/ref sample rates differ");
  }
  const int want_rate = cfg_.subband ? 48000 : 16000;
  if (mic.sample_rate != want_rate) {
    throw ConfigError("Pipeline: expected " + std::to_string(want_rate) +
                      " Hz input for this configuration");
  }

  RunReport local;
  RunReport& rep = report != nullptr ? *report : local;
  rep = RunReport();
  rep.filter = cfg_.filter;
  rep.audio_seconds = mic.DurationSeconds();
  auto timed = [&rep](const char* name, auto&& fn) {
    const Clock::time_point t0 = Clock::now();
    fn();
    rep.stages.push_back({name, SecondsSince(t0)});
  };

  const int full_len = std::min(mic.NumSamples(), ref.NumSamples());

  // Band split (or wide-band passthrough).
  AudioBuffer d, x;
  SubbandSignal sub_d;
  timed("split", [&] {
    if (cfg_.subband) {
      sub_d = Split(CropTo(mic, full_len), fb_);
      SubbandSignal sub_x = Split(CropTo(ref, full_len), fb_);
      d = std::move(sub_d.wide);
      x = std::move(sub_x.wide);
    } else {
      d = CropTo(mic, full_len);
      x = CropTo(ref, full_len);
    }
  });

  // Reference alignment on the wide band.
  AudioBuffer x_al;
  timed("tde", [&] {
    if (cfg_.tde_enabled && d.NumSamples() >= cfg_.tde.block) {
      rep.delay = EstimateDelay(x, d, cfg_.tde);
      rep.delay_applied = rep.delay.Reliable(cfg_.tde.confidence_threshold);
    }
    DelayEstimate applied = rep.delay_applied ? rep.delay : DelayEstimate();
    x_al = Align(x, applied, d.NumSamples());
  });

  // Linear stage.  D is needed in every path (identity output, DX feature,
  // high-band gain reference).
  Spectrogram spec_d, spec_e, spec_x, spec_y;
  const bool need_x = cfg_.UsesModel() && (cfg_.combo == SignalCombo::kDX ||
                                           cfg_.combo == SignalCombo::kEX);
  timed("aec", [&] {
    spec_d = Stft(d, cfg_.stft);
    switch (cfg_.filter) {
      case FilterKind::kNone:
        break;
      case FilterKind::kMdf: {
        MdfFilter filt(cfg_.mdf);
        auto [e_t, y_t] = filt.ProcessSignal(x_al, d);
        spec_e = Stft(e_t, cfg_.stft);
        spec_y = Stft(y_t, cfg_.stft);
        break;
      }
      case FilterKind::kWrls: {
        spec_x = Stft(x_al, cfg_.stft);
        WrlsFilter filt(cfg_.stft.num_bins(), cfg_.wrls);
        auto [e_s, y_s] = filt.Process(spec_x, spec_d);
        spec_e = std::move(e_s);
        spec_y = std::move(y_s);
        rep.wrls_reinits = filt.reinit_count();
        break;
      }
    }
    if (need_x && spec_x.num_frames == 0) spec_x = Stft(x_al, cfg_.stft);
  });

  // Post-filter (or DSP-only passthrough of e / d).
  Spectrogram s_hat;
  timed("postfilter", [&] {
    if (cfg_.UsesModel()) {
      const double p = cfg_.compress_power;
      Spectrogram cd = CompressSpectrum(spec_d, p);
      Spectrogram ce, cx, cy;
      if (cfg_.filter != FilterKind::kNone) {
        ce = CompressSpectrum(spec_e, p);
        cy = CompressSpectrum(spec_y, p);
      }
      if (need_x) cx = CompressSpectrum(spec_x, p);
      FeatureTensor feat = StackFeatures(
          cfg_.combo, &cd, ce.num_frames > 0 ? &ce : nullptr,
          cx.num_frames > 0 ? &cx : nullptr,
          cy.num_frames > 0 ? &cy : nullptr);
      NetOutput out = model_->Forward(feat, p);
      s_hat = std::move(out.s_hat);
    } else {
      s_hat = cfg_.filter == FilterKind::kNone ? spec_d : spec_e;
    }
  });

  // High-band gain and resynthesis.
  AudioBuffer out;
  if (cfg_.subband) {
    GainTrack gains;
    timed("gain", [&] {
      gains = HighBandGain(s_hat, spec_d, cfg_.gain_band);
    });
    timed("synthesis", [&] {
      out = Synthesize(s_hat, sub_d, gains, fb_, cfg_.stft);
    });
  } else {
    timed("synthesis", [&] {
      AudioBuffer rec = Istft(s_hat, cfg_.stft);
      rec.sample_rate = d.sample_rate;
      out = CropTo(rec, d.NumSamples());
    });
  }

  // Documented pipeline latency on top of the physical filter-bank delay.
  const int base_delay = cfg_.subband
                             ? (cfg_.stft.win_length + cfg_.stft.hop) * 3
                             : cfg_.stft.win_length + cfg_.stft.hop;
  rep.output_delay_samples = OutputDelaySamples();
  out = DelayBy(out, base_delay);
  out.sample_rate = want_rate;
  return out;
}

}  // namespace fbaec
