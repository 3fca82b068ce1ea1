// tests/pipeline_test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "fbaec/metrics.h"
#include "fbaec/pipeline.h"
#include "fbaec/simulate.h"
#include "oracles.h"

using fbaec::AudioBuffer;
using fbaec::ConfigError;
using fbaec::FilterKind;
using fbaec::FilterKindName;
using fbaec::GftnnModel;
using fbaec::ModelLoadError;
using fbaec::ParseFilterKind;
using fbaec::Pipeline;
using fbaec::PipelineConfig;
using fbaec::RunReport;
using fbaec::SignalCombo;

namespace {

PipelineConfig IdentityConfig16k() {
  PipelineConfig cfg;
  cfg.filter = FilterKind::kNone;
  cfg.tde_enabled = false;
  cfg.subband = false;
  cfg.model_path.clear();
  return cfg;
}

AudioBuffer ImpulseBuffer(int n, int pos, int rate) {
  AudioBuffer b;
  b.sample_rate = rate;
  b.samples.assign(static_cast<size_t>(n), 0.0);
  b.samples[static_cast<size_t>(pos)] = 1.0;
  return b;
}

AudioBuffer NoiseBuffer(int n, uint32_t seed, double sigma, int rate) {
  AudioBuffer b;
  b.sample_rate = rate;
  b.samples = oracles::WhiteNoise(n, seed, sigma);
  return b;
}

int ArgMax(const std::vector<double>& v) {
  int best = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = static_cast<int>(i);
  }
  return best;
}

// ERLE over [begin, end) of the mic signal, with the pipeline's output
// latency compensated.
double DelayedErleDb(const AudioBuffer& d, const AudioBuffer& out, int delay,
                     int begin, int end) {
  double ed = 0.0, eo = 0.0;
  for (int i = begin; i < end; ++i) {
    ed += d.samples[i] * d.samples[i];
    const int j = i + delay;
    if (j < out.NumSamples()) eo += out.samples[j] * out.samples[j];
  }
  return 10.0 * std::log10(ed / std::max(eo, 1e-300));
}

}  // namespace

TEST_CASE("filter kind names round trip") {
  for (FilterKind k : {FilterKind::kNone, FilterKind::kMdf, FilterKind::kWrls}) {
    CHECK(ParseFilterKind(FilterKindName(k)) == k);
  }
  CHECK_THROWS_AS(ParseFilterKind("nlms"), ConfigError);
}

TEST_CASE("wide-band identity pipeline delays by window plus hop") {
  Pipeline p(IdentityConfig16k());
  CHECK(p.OutputDelaySamples() == 480);
  const int n = 16000, pos = 7000;
  const AudioBuffer mic = ImpulseBuffer(n, pos, 16000);
  const AudioBuffer ref = NoiseBuffer(n, 40, 0.1, 16000);
  RunReport rep;
  const AudioBuffer out = p.Process(mic, ref, &rep);
  REQUIRE(out.NumSamples() == n);
  CHECK(out.sample_rate == 16000);
  const int peak = ArgMax(out.samples);
  CHECK(peak == pos + 480);
  CHECK(out.samples[peak] == doctest::Approx(1.0).epsilon(1e-6));
  // Leakage elsewhere stays at reconstruction-error level.
  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(i - peak) > 2) residual += out.samples[i] * out.samples[i];
  }
  CHECK(10.0 * std::log10(residual + 1e-300) < -100.0);
  CHECK(rep.output_delay_samples == 480);
  CHECK(!rep.delay_applied);
}

TEST_CASE("subband identity pipeline delay includes the filter bank") {
  PipelineConfig cfg = IdentityConfig16k();
  cfg.subband = true;
  Pipeline p(cfg);
  const int expected = 3 * 480 + 95;
  CHECK(p.OutputDelaySamples() == expected);
  const int n = 48000, pos = 20000;
  const AudioBuffer mic = ImpulseBuffer(n, pos, 48000);
  const AudioBuffer ref = NoiseBuffer(n, 41, 0.1, 48000);
  const AudioBuffer out = p.Process(mic, ref, nullptr);
  REQUIRE(out.NumSamples() == n);
  CHECK(out.sample_rate == 48000);
  const int peak = ArgMax(out.samples);
  CHECK(peak == pos + expected);
  CHECK(out.samples[peak] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sample-rate contract is enforced") {
  Pipeline wide(IdentityConfig16k());
  const AudioBuffer b48 = NoiseBuffer(48000, 42, 0.1, 48000);
  const AudioBuffer b16 = NoiseBuffer(16000, 43, 0.1, 16000);
  CHECK_THROWS_AS(wide.Process(b48, b48, nullptr), ConfigError);

  PipelineConfig cfg = IdentityConfig16k();
  cfg.subband = true;
  Pipeline sub(cfg);
  CHECK_THROWS_AS(sub.Process(b16, b16, nullptr), ConfigError);

  AudioBuffer wrong = b16;
  wrong.sample_rate = 48000;
  CHECK_THROWS_AS(wide.Process(b16, wrong, nullptr), ConfigError);
}

TEST_CASE("dsp pipeline cancels a static echo path") {
  const int n = 128000;  // 8 s
  const AudioBuffer x = NoiseBuffer(n, 44, 0.3, 16000);
  const std::vector<double> rir = fbaec::SynthRir(50.0, 800, 16000, 45);
  AudioBuffer d = fbaec::RenderEcho(x, rir, false);

  PipelineConfig cfg;
  cfg.filter = FilterKind::kMdf;
  cfg.tde_enabled = true;
  cfg.subband = false;
  cfg.model_path.clear();
  Pipeline p(cfg);
  RunReport rep;
  const AudioBuffer out = p.Process(d, x, &rep);
  REQUIRE(out.NumSamples() == n);

  const double erle =
      DelayedErleDb(d, out, p.OutputDelaySamples(), 5 * 16000, n - 480);
  CHECK(erle >= 30.0);
  CHECK(rep.filter == FilterKind::kMdf);
  CHECK(!rep.stages.empty());
  CHECK(rep.TotalSeconds() > 0.0);
  CHECK(rep.TotalRtf() > 0.0);
  CHECK(rep.output_delay_samples == 480);
}

TEST_CASE("reference alignment recovers a bulk delay") {
  const int n = 96000, lag = 800;
  const AudioBuffer x = NoiseBuffer(n, 46, 0.3, 16000);
  AudioBuffer d;
  d.sample_rate = 16000;
  d.samples.assign(static_cast<size_t>(n), 0.0);
  for (int i = lag; i < n; ++i) d.samples[i] = 0.7 * x.samples[i - lag];

  PipelineConfig cfg;
  cfg.filter = FilterKind::kMdf;
  cfg.tde_enabled = true;
  cfg.subband = false;
  Pipeline p(cfg);
  RunReport rep;
  const AudioBuffer out = p.Process(d, x, &rep);
  CHECK(rep.delay.delay == lag);
  CHECK(rep.delay_applied);
  const double erle =
      DelayedErleDb(d, out, p.OutputDelaySamples(), 4 * 16000, n - 480);
  CHECK(erle >= 30.0);
}

TEST_CASE("model-driven pipeline runs deterministically") {
  PipelineConfig cfg;
  cfg.filter = FilterKind::kWrls;
  cfg.tde_enabled = false;
  cfg.subband = false;
  cfg.combo = SignalCombo::kDEY;
  cfg.model_channels = 12;
  cfg.model_path = "injected";  // marks the model as in use
  GftnnModel model = GftnnModel::RandomInit(cfg.Arch(), 47);
  Pipeline p(cfg, std::move(model));

  const int n = 32000;
  const AudioBuffer x = NoiseBuffer(n, 48, 0.3, 16000);
  AudioBuffer d = fbaec::RenderEcho(x, fbaec::SynthRir(30.0, 400, 16000, 49),
                                    false);
  for (int i = 0; i < n; ++i) {
    d.samples[i] = 0.5 * d.samples[i] +
                   0.2 * std::sin(2.0 * oracles::kPi * 350.0 * i / 16000.0);
  }

  RunReport rep1, rep2;
  const AudioBuffer out1 = p.Process(d, x, &rep1);
  const AudioBuffer out2 = p.Process(d, x, &rep2);
  REQUIRE(out1.NumSamples() == n);
  CHECK(out1.samples == out2.samples);
  for (double v : out1.samples) REQUIRE(std::isfinite(v));
  CHECK(oracles::EnergyOf(out1.samples) > 0.0);
  CHECK(rep1.filter == FilterKind::kWrls);
  CHECK(rep1.output_delay_samples == 480);
  const std::string text = rep1.ToText();
  CHECK(text.find("filter=wrls") != std::string::npos);
  CHECK(text.find("rtf") != std::string::npos);
}

TEST_CASE("combo and filter coupling") {
  PipelineConfig cfg;
  cfg.filter = FilterKind::kNone;
  cfg.subband = false;
  cfg.model_path = "weights.gftw";
  cfg.combo = SignalCombo::kDEY;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);
  cfg.combo = SignalCombo::kEX;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);
  cfg.combo = SignalCombo::kDX;
  CHECK_NOTHROW(cfg.Validate());
}

TEST_CASE("filterless dx model runs end to end") {
  PipelineConfig cfg;
  cfg.filter = FilterKind::kNone;
  cfg.tde_enabled = false;
  cfg.subband = false;
  cfg.combo = SignalCombo::kDX;
  cfg.model_channels = 12;
  cfg.model_path = "injected";
  Pipeline p(cfg, GftnnModel::RandomInit(cfg.Arch(), 50));
  const AudioBuffer x = NoiseBuffer(16000, 51, 0.2, 16000);
  const AudioBuffer d = NoiseBuffer(16000, 52, 0.2, 16000);
  const AudioBuffer out = p.Process(d, x, nullptr);
  CHECK(out.NumSamples() == 16000);
  for (double v : out.samples) REQUIRE(std::isfinite(v));
}

TEST_CASE("injected model arch must match the configuration") {
  PipelineConfig cfg;
  cfg.filter = FilterKind::kWrls;
  cfg.subband = false;
  cfg.combo = SignalCombo::kDEY;
  cfg.model_channels = 16;
  cfg.model_path = "injected";
  fbaec::ModelArch other = cfg.Arch();
  other.channels = 12;
  CHECK_THROWS_AS(Pipeline(cfg, GftnnModel::RandomInit(other, 53)),
                  ModelLoadError);
}
