// tests/subband_test.cc

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
#include <cstdio>
#include <fstream>
#include <vector>

#include "fbaec/stft.h"
#include "fbaec/subband.h"
#include "oracles.h"

using fbaec::AudioBuffer;
using fbaec::ConfigError;
using fbaec::FilterBank;
using fbaec::GainBandConfig;
using fbaec::GainTrack;
using fbaec::HighBandGain;
using fbaec::ShapeError;
using fbaec::Spectrogram;
using fbaec::Split;
using fbaec::StftConfig;
using fbaec::SubbandSignal;
using fbaec::Synthesize;

namespace {

AudioBuffer Tone48k(double hz, double seconds = 0.5, double amp = 0.5) {
  AudioBuffer buf;
  buf.sample_rate = 48000;
  const int n = static_cast<int>(seconds * 48000);
  buf.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    buf.samples[i] = amp * std::sin(2.0 * oracles::kPi * hz * i / 48000.0);
  }
  return buf;
}

AudioBuffer Noise48k(int n, uint32_t seed) {
  AudioBuffer buf;
  buf.sample_rate = 48000;
  buf.samples = oracles::WhiteNoise(n, seed, 0.2);
  return buf;
}

double BandEnergyFraction(const SubbandSignal& sub, int band) {
  const double e0 = oracles::EnergyOf(sub.wide.samples);
  const double e1 = oracles::EnergyOf(sub.high[0]);
  const double e2 = oracles::EnergyOf(sub.high[1]);
  const double total = e0 + e1 + e2;
  const double e = band == 0 ? e0 : band == 1 ? e1 : e2;
  return total > 0.0 ? e / total : 0.0;
}

// Full chain at unit gain with the wide band passed through its STFT.
AudioBuffer RoundTrip(const AudioBuffer& in, const FilterBank& fb) {
  const StftConfig cfg;
  SubbandSignal sub = Split(in, fb);
  const Spectrogram wide_spec = fbaec::Stft(sub.wide, cfg);
  GainTrack g;
  g.g.assign(wide_spec.num_frames, 1.0);
  return Synthesize(wide_spec, sub, g, fb, cfg);
}

// RMS error in dB between the round-trip output and the input delayed by
// the documented chain latency.
double ReconstructionDb(const AudioBuffer& in, const AudioBuffer& out,
                        int delay) {
  const int skip = 4800;  // ignore edge transients
  std::vector<double> err, ref;
  for (int i = skip; i + delay < static_cast<int>(out.samples.size()) - skip &&
                     i < static_cast<int>(in.samples.size());
       ++i) {
    err.push_back(out.samples[i + delay] - in.samples[i]);
    ref.push_back(in.samples[i]);
  }
  return oracles::RmsDb(err, ref);
}

}  // namespace

TEST_CASE("design validates the tap count") {
  CHECK_THROWS_AS(FilterBank::Design(31), ConfigError);
  CHECK_THROWS_AS(FilterBank::Design(30), ConfigError);
  CHECK_NOTHROW(FilterBank::Design(32));
}

TEST_CASE("prototype crosses -3 dB at the band edge") {
  const FilterBank fb = FilterBank::Design();
  CHECK(fb.num_taps() == 96);
  CHECK(fb.GroupDelay() == 95);
  // |H(e^{j pi/6})| at the first band edge.
  std::complex<double> h(0.0, 0.0);
  for (int i = 0; i < fb.num_taps(); ++i) {
    const double ang = -oracles::kPi / 6.0 * i;
    h += fb.prototype()[i] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  double dc = 0.0;
  for (double t : fb.prototype()) dc += t;
  CHECK(20.0 * std::log10(std::abs(h) / dc) ==
        doctest::Approx(-3.0).epsilon(0.05));
}

TEST_CASE("white-noise analysis+synthesis reconstructs below -40 dB") {
  const FilterBank fb = FilterBank::Design();
  const AudioBuffer in = Noise48k(48000, 11);
  const AudioBuffer out = RoundTrip(in, fb);
  CHECK(static_cast<int>(out.samples.size()) ==
        static_cast<int>(in.samples.size()));
  // The stft/istft pair is delay-free, so the chain lag is the filter bank
  // group delay alone.
  CHECK(ReconstructionDb(in, out, fb.GroupDelay()) < -40.0);
}

TEST_CASE("tones land in their designated bands") {
  const FilterBank fb = FilterBank::Design();
  struct Case {
    double hz;
    int band;
  };
  for (const Case& c : {Case{1000.0, 0}, Case{4000.0, 0}, Case{12000.0, 1},
                        Case{20000.0, 2}}) {
    const SubbandSignal sub = Split(Tone48k(c.hz), fb);
    CHECK(BandEnergyFraction(sub, c.band) >= 0.99);
  }
}

TEST_CASE("1 kHz tone leaves only -40 dB leakage in the high bands") {
  const FilterBank fb = FilterBank::Design();
  const AudioBuffer tone = Tone48k(1000.0);
  const SubbandSignal sub = Split(tone, fb);
  const double in_power = oracles::EnergyOf(tone.samples);
  CHECK(oracles::EnergyOf(sub.high[0]) < in_power * 1e-4);
  CHECK(oracles::EnergyOf(sub.high[1]) < in_power * 1e-4);
  // The wide band actually carries it, at the decimated rate.
  CHECK(sub.wide.sample_rate == 16000);
  CHECK(oracles::EnergyOf(sub.wide.samples) > 0.01 * in_power);
}

TEST_CASE("silence splits to silent subbands") {
  const FilterBank fb = FilterBank::Design();
  AudioBuffer quiet;
  quiet.sample_rate = 48000;
  quiet.samples.assign(9600, 0.0);
  const SubbandSignal sub = Split(quiet, fb);
  CHECK(oracles::EnergyOf(sub.wide.samples) == 0.0);
  CHECK(oracles::EnergyOf(sub.high[0]) == 0.0);
  CHECK(oracles::EnergyOf(sub.high[1]) == 0.0);
}

TEST_CASE("split rejects non-48k input") {
  const FilterBank fb = FilterBank::Design();
  AudioBuffer wrong;
  wrong.sample_rate = 16000;
  wrong.samples.assign(1600, 0.1);
  CHECK_THROWS_AS(Split(wrong, fb), ConfigError);
}

TEST_CASE("high-band gain follows the band-ratio minimum") {
  GainBandConfig cfg;
  const int bins = 161, frames = 4;
  Spectrogram d(frames, bins);
  for (auto& v : d.data) v = {1.0, 0.0};

  SUBCASE("identical spectra give unit gain") {
    const GainTrack g = HighBandGain(d, d, cfg);
    REQUIRE(static_cast<int>(g.g.size()) == frames);
    for (double v : g.g) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero estimate gives zero gain") {
    const Spectrogram zero(frames, bins);
    const GainTrack g = HighBandGain(zero, d, cfg);
    for (double v : g.g) CHECK(v == 0.0);
  }
  SUBCASE("gain is the minimum of the two band ratios") {
    Spectrogram s_hat(frames, bins);
    // Band [a,b] ratio 0.5; band [c,d] ratio 0.8 (1-based inclusive bins).
    for (int t = 0; t < frames; ++t) {
      for (int f = cfg.a - 1; f <= cfg.b - 1; ++f) s_hat.at(t, f) = {0.5, 0.0};
      for (int f = cfg.c - 1; f <= cfg.d - 1; ++f) s_hat.at(t, f) = {0.8, 0.0};
    }
    const GainTrack g = HighBandGain(s_hat, d, cfg);
    for (double v : g.g) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("gain clamps at g_max") {
    Spectrogram s_hat(frames, bins);
    for (auto& v : s_hat.data) v = {3.0, 0.0};
    const GainTrack g = HighBandGain(s_hat, d, cfg);
    for (double v : g.g) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("silent denominator frames get zero gain") {
    const Spectrogram quiet(frames, bins);
    const GainTrack g = HighBandGain(d, quiet, cfg);
    for (double v : g.g) CHECK(v == 0.0);
  }
  SUBCASE("scaling the estimate scales the gain below the clamp") {
    Spectrogram s_hat(frames, bins);
    for (auto& v : s_hat.data) v = {0.3, 0.0};
    const GainTrack g1 = HighBandGain(s_hat, d, cfg);
    for (auto& v : s_hat.data) v = {0.6, 0.0};
    const GainTrack g2 = HighBandGain(s_hat, d, cfg);
    for (int t = 0; t < frames; ++t) {
      CHECK(g2.g[t] == doctest::Approx(2.0 * g1.g[t]).epsilon(1e-12));
    }
  }
  SUBCASE("band edges must fit the bin count") {
    GainBandConfig bad = cfg;
    bad.d = 200;
    CHECK_THROWS_AS(bad.Validate(161), ConfigError);
    bad = cfg;
    bad.a = 0;
    CHECK_THROWS_AS(bad.Validate(161), ConfigError);
    CHECK_NOTHROW(cfg.Validate(161));
  }
}

TEST_CASE("zero high-band gain mutes the high bands") {
  const FilterBank fb = FilterBank::Design();
  const StftConfig cfg;
  // 18 kHz tone lives entirely in band 2; with g = 0 it must vanish.
  const AudioBuffer tone = Tone48k(18000.0);
  SubbandSignal sub = Split(tone, fb);
  const Spectrogram wide_spec = fbaec::Stft(sub.wide, cfg);
  GainTrack g;
  g.g.assign(wide_spec.num_frames, 0.0);
  const AudioBuffer out = Synthesize(wide_spec, sub, g, fb, cfg);
  CHECK(oracles::EnergyOf(out.samples) <
        1e-4 * oracles::EnergyOf(tone.samples));
}

TEST_CASE("zero spectrum and zero gain synthesize silence") {
  const FilterBank fb = FilterBank::Design();
  const StftConfig cfg;
  SubbandSignal sub = Split(Noise48k(24000, 12), fb);
  const Spectrogram wide_spec = fbaec::Stft(sub.wide, cfg);
  GainTrack g;
  g.g.assign(wide_spec.num_frames, 0.0);
  const AudioBuffer out =
      Synthesize(Spectrogram(wide_spec.num_frames, cfg.num_bins()), sub, g, fb,
                 cfg);
  CHECK(oracles::EnergyOf(out.samples) == 0.0);
}

TEST_CASE("synthesis rejects mismatched gain length") {
  const FilterBank fb = FilterBank::Design();
  const StftConfig cfg;
  SubbandSignal sub = Split(Noise48k(24000, 13), fb);
  const Spectrogram wide_spec = fbaec::Stft(sub.wide, cfg);
  GainTrack g;
  g.g.assign(wide_spec.num_frames + 2, 1.0);
  CHECK_THROWS_AS(Synthesize(wide_spec, sub, g, fb, cfg), ShapeError);
}

TEST_CASE("tap export writes float32 records for all filters") {
  const FilterBank fb = FilterBank::Design();
  const std::string path = "/tmp/fbaec_taps_test.bin";
  fb.ExportTaps(path);
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  REQUIRE(in.good());
  // prototype + 3 analysis + 3 synthesis, 96 float32 taps each.
  CHECK(static_cast<long>(in.tellg()) >= 7L * 96L * 4L);
  std::remove(path.c_str());
}
