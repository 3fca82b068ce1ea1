// src/simulate.cc

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

#include "fbaec/simulate.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fbaec/fft.h"
#include "fbaec/losses.h"
#include "fbaec/wav_io.h"

namespace fbaec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AudioBuffer CropOrPad(const AudioBuffer& in, int num_samples) {
  AudioBuffer out;
  out.sample_rate = in.sample_rate;
  out.samples.assign(static_cast<size_t>(num_samples), 0.0);
  const int n = std::min(num_samples, in.NumSamples());
  std::copy(in.samples.begin(), in.samples.begin() + n, out.samples.begin());
  return out;
}

// Sample-level activity mask: a sample counts as near-end-active when any
// analysis frame covering it fires the energy label.
std::vector<char> ActiveMask(const AudioBuffer& s) {
  VadLabelConfig cfg;
  std::vector<int> labels = VadLabels(s, cfg);
  std::vector<char> mask(s.samples.size(), 0);
  const int win = cfg.framing.win_length;
  const int hop = cfg.framing.hop;
  for (size_t t = 0; t < labels.size(); ++t) {
    if (!labels[t]) continue;
    size_t start = t * static_cast<size_t>(hop);
    for (int i = 0; i < win && start + i < mask.size(); ++i) {
      mask[start + i] = 1;
    }
  }
  return mask;
}

double MaskedEnergy(const AudioBuffer& a, const std::vector<char>& mask) {
  double acc = 0.0;
  for (size_t i = 0; i < a.samples.size(); ++i) {
    if (mask[i]) acc += a.samples[i] * a.samples[i];
  }
  return acc;
}

double RatioDb(double num, double den) {
  if (den <= 0.0) return kInf;
  if (num <= 0.0) return -kInf;
  return 10.0 * std::log10(num / den);
}

std::string FormatDb(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string ScenarioName(Scenario s) {
  switch (s) {
    case Scenario::kDoubleTalk:
      return "dt";
    case Scenario::kNearEndOnly:
      return "st_ne";
    case Scenario::kFarEndOnly:
      return "st_fe";
  }
  return "unknown";
}

void MixSpec::Validate() const {
  if (std::isnan(ser_db) || ser_db == -kInf) {
    throw ConfigError("MixSpec: ser_db must be finite or +inf");
  }
  if (std::isnan(snr_db) || snr_db == -kInf) {
    throw ConfigError("MixSpec: snr_db must be finite or +inf");
  }
  if (scenario == Scenario::kNearEndOnly && ser_db != kInf) {
    throw ConfigError("MixSpec: near-end single-talk requires ser_db = +inf");
  }
  if (scenario == Scenario::kFarEndOnly && ser_db == kInf) {
    throw ConfigError("MixSpec: far-end single-talk needs a finite nominal SER");
  }
  if (scenario == Scenario::kDoubleTalk && ser_db == kInf) {
    throw ConfigError("MixSpec: double talk requires a finite SER");
  }
}

std::vector<MixSpec> DefaultGrid(uint32_t base_seed, bool nonlinear) {
  const double sers[] = {-5.0, 5.0, 15.0};
  const double snrs[] = {5.0, kInf};
  std::vector<MixSpec> grid;
  uint32_t idx = 0;
  auto push = [&](double ser, double snr, Scenario sc, const std::string& name) {
    MixSpec m;
    m.ser_db = ser;
    m.snr_db = snr;
    m.nonlinear = nonlinear;
    m.seed = base_seed + idx++;
    m.scenario = sc;
    m.name = name;
    grid.push_back(m);
  };
  auto tag = [](double v) {
    std::ostringstream os;
    if (v == kInf) {
      os << "inf";
    } else {
      os << static_cast<long long>(std::llround(v));
    }
    return os.str();
  };
  for (double snr : snrs) {
    for (double ser : sers) {
      push(ser, snr, Scenario::kDoubleTalk,
           "dt_ser" + tag(ser) + "_snr" + tag(snr));
    }
  }
  for (double snr : snrs) {
    push(kInf, snr, Scenario::kNearEndOnly, "st_ne_snr" + tag(snr));
  }
  for (double ser : sers) {
    push(ser, kInf, Scenario::kFarEndOnly, "st_fe_ser" + tag(ser));
  }
  return grid;
}

std::vector<double> SynthRir(double decay_ms, int length, int sample_rate,
                             uint32_t seed) {
  if (length <= 0) throw ConfigError("SynthRir: length must be positive");
  if (decay_ms < 0.0) throw ConfigError("SynthRir: decay_ms must be >= 0");
  std::vector<double> h(static_cast<size_t>(length), 0.0);
  h[0] = 1.0;
  if (decay_ms > 0.0 && length > 1) {
    // Amplitude time constant giving a 60 dB energy drop after decay_ms.
    const double tau = decay_ms * 1e-3 * sample_rate / (3.0 * std::log(10.0));
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 1; i < length; ++i) {
      h[i] = 0.3 * std::exp(-i / tau) * gauss(rng);
    }
  }
  double energy = 0.0;
  for (double v : h) energy += v * v;
  const double scale = 1.0 / std::sqrt(energy);
  for (double& v : h) v *= scale;
  return h;
}

AudioBuffer RenderEcho(const AudioBuffer& x, const std::vector<double>& rir,
                       bool nonlinear) {
  if (rir.empty()) throw ConfigError("RenderEcho: empty impulse response");
  ValidateAudio(x, "RenderEcho far end");
  AudioBuffer src = x;
  if (nonlinear) {
    for (double& v : src.samples) v = std::clamp(v, -0.8, 0.8);
  }
  const int n = src.NumSamples();
  const int k = static_cast<int>(rir.size());
  AudioBuffer out;
  out.sample_rate = x.sample_rate;
  out.samples.assign(static_cast<size_t>(n), 0.0);
  if (n == 0) return out;

  if (k <= 32) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      const int jmax = std::min(k, i + 1);
      for (int j = 0; j < jmax; ++j) acc += rir[j] * src.samples[i - j];
      out.samples[i] = acc;
    }
    return out;
  }

  int fft_size = 1;
  while (fft_size < n + k - 1) fft_size <<= 1;
  RealFft fft(fft_size);
  std::vector<double> a(static_cast<size_t>(fft_size), 0.0);
  std::vector<double> b(static_cast<size_t>(fft_size), 0.0);
  std::copy(src.samples.begin(), src.samples.end(), a.begin());
  std::copy(rir.begin(), rir.end(), b.begin());
  std::vector<std::complex<double>> sa = fft.Forward(a);
  std::vector<std::complex<double>> sb = fft.Forward(b);
  for (size_t i = 0; i < sa.size(); ++i) sa[i] *= sb[i];
  std::vector<double> conv = fft.Inverse(sa);
  std::copy(conv.begin(), conv.begin() + n, out.samples.begin());
  return out;
}

double MeasureSer(const AudioBuffer& s, const AudioBuffer& z) {
  std::vector<char> mask = ActiveMask(s);
  const double es = MaskedEnergy(s, mask);
  if (es <= 0.0) {
    return SignalEnergy(z.samples) > 0.0 ? -kInf : kInf;
  }
  return RatioDb(es, MaskedEnergy(z, mask));
}

double MeasureSnr(const AudioBuffer& s, const AudioBuffer& v) {
  return RatioDb(SignalEnergy(s.samples), SignalEnergy(v.samples));
}

MixtureRecord Mix(const AudioBuffer& s, const AudioBuffer& z,
                  const AudioBuffer& v, const MixSpec& spec) {
  spec.Validate();
  if (s.NumSamples() != z.NumSamples() || s.NumSamples() != v.NumSamples()) {
    throw ShapeError("Mix: component lengths differ");
  }
  if (s.sample_rate != z.sample_rate || s.sample_rate != v.sample_rate) {
    throw ConfigError("Mix: sample rates differ");
  }

  MixtureRecord rec;
  rec.spec = spec;
  rec.s = s;
  rec.z = z;
  rec.v = v;

  // Echo gain from the requested SER, measured against the (reference)
  // near end over its active samples.
  if (spec.ser_db == kInf) {
    std::fill(rec.z.samples.begin(), rec.z.samples.end(), 0.0);
  } else {
    std::vector<char> mask = ActiveMask(s);
    const double es = MaskedEnergy(s, mask);
    const double ez = MaskedEnergy(z, mask);
    if (es <= 0.0) {
      throw ConfigError("Mix: finite SER requested against a silent near end");
    }
    if (ez <= 0.0) {
      throw ConfigError("Mix: finite SER requested against a silent echo");
    }
    const double gain = std::sqrt(es / (ez * std::pow(10.0, spec.ser_db / 10.0)));
    for (double& smp : rec.z.samples) smp *= gain;
  }

  if (spec.snr_db == kInf || spec.scenario == Scenario::kFarEndOnly) {
    std::fill(rec.v.samples.begin(), rec.v.samples.end(), 0.0);
  } else {
    const double es = SignalEnergy(s.samples);
    const double ev = SignalEnergy(v.samples);
    if (es <= 0.0) {
      throw ConfigError("Mix: finite SNR requested against a silent near end");
    }
    if (ev <= 0.0) {
      throw ConfigError("Mix: finite SNR requested against silent noise");
    }
    const double gain = std::sqrt(es / (ev * std::pow(10.0, spec.snr_db / 10.0)));
    for (double& smp : rec.v.samples) smp *= gain;
  }

  if (spec.scenario == Scenario::kFarEndOnly) {
    std::fill(rec.s.samples.begin(), rec.s.samples.end(), 0.0);
  }

  rec.d.sample_rate = s.sample_rate;
  rec.d.samples.resize(s.samples.size());
  for (size_t i = 0; i < rec.d.samples.size(); ++i) {
    rec.d.samples[i] = rec.s.samples[i] + rec.z.samples[i] + rec.v.samples[i];
  }
  rec.realized_ser_db = MeasureSer(rec.s, rec.z);
  rec.realized_snr_db = MeasureSnr(rec.s, rec.v);
  return rec;
}

MixtureRecord RenderCondition(const AudioBuffer& s_src,
                              const AudioBuffer& x_src, const MixSpec& spec,
                              const TestSetOptions& opts) {
  if (s_src.sample_rate != x_src.sample_rate) {
    throw ConfigError("RenderCondition: source sample rates differ");
  }
  const int chunk =
      static_cast<int>(std::lround(opts.chunk_seconds * s_src.sample_rate));
  AudioBuffer s = CropOrPad(s_src, chunk);
  AudioBuffer x = CropOrPad(x_src, chunk);

  std::vector<double> rir =
      SynthRir(opts.rir_decay_ms, opts.rir_length, s.sample_rate, spec.seed);
  AudioBuffer z = RenderEcho(x, rir, spec.nonlinear);

  AudioBuffer v;
  v.sample_rate = s.sample_rate;
  v.samples.resize(static_cast<size_t>(chunk));
  std::mt19937 rng(spec.seed ^ 0x9e3779b9u);
  std::normal_distribution<double> gauss(0.0, 0.05);
  for (double& smp : v.samples) smp = gauss(rng);

  MixtureRecord rec = Mix(s, z, v, spec);
  rec.x = std::move(x);

  // Common headroom scaling; equal gain on every component preserves the
  // realized ratios and the additive identity.
  double peak = 0.0;
  for (const AudioBuffer* b : {&rec.d, &rec.x}) {
    for (double smp : b->samples) peak = std::max(peak, std::abs(smp));
  }
  if (peak > 0.9) {
    const double g = 0.9 / peak;
    for (AudioBuffer* b : {&rec.d, &rec.s, &rec.z, &rec.v, &rec.x}) {
      for (double& smp : b->samples) smp *= g;
    }
  }
  return rec;
}

std::string BuildTestSet(const AudioBuffer& s_src, const AudioBuffer& x_src,
                         const std::vector<MixSpec>& grid,
                         const std::string& out_dir,
                         const TestSetOptions& opts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("BuildTestSet: cannot create " + out_dir);

  std::ostringstream manifest;
  manifest << "# mixture manifest v1\n"
           << "# name scenario ser_db snr_db nonlinear seed realized_ser "
              "realized_snr d s z v x\n";
  for (const MixSpec& spec : grid) {
    if (spec.name.empty()) throw ConfigError("BuildTestSet: unnamed condition");
    MixtureRecord rec = RenderCondition(s_src, x_src, spec, opts);
    fs::path dir = fs::path(out_dir) / spec.name;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("BuildTestSet: cannot create " + dir.string());
    const char* stems[] = {"d", "s", "z", "v", "x"};
    const AudioBuffer* bufs[] = {&rec.d, &rec.s, &rec.z, &rec.v, &rec.x};
    for (int i = 0; i < 5; ++i) {
      WriteWav((dir / (std::string(stems[i]) + ".wav")).string(), *bufs[i],
               WavFormat::kFloat32);
    }
    manifest << spec.name << ' ' << ScenarioName(spec.scenario) << ' '
             << FormatDb(spec.ser_db) << ' ' << FormatDb(spec.snr_db) << ' '
             << (spec.nonlinear ? 1 : 0) << ' ' << spec.seed << ' '
             << FormatDb(rec.realized_ser_db) << ' '
             << FormatDb(rec.realized_snr_db);
    for (const char* stem : stems) {
      manifest << ' ' << spec.name << '/' << stem << ".wav";
    }
    manifest << '\n';
  }

  fs::path manifest_path = fs::path(out_dir) / "manifest.txt";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("BuildTestSet: cannot write manifest");
  out << manifest.str();
  return manifest_path.string();
}

AudioBuffer SynthSpeechLike(double seconds, int sample_rate, uint32_t seed) {
  if (seconds <= 0.0 || sample_rate <= 0) {
    throw ConfigError("SynthSpeechLike: bad duration or rate");
  }
  AudioBuffer out;
  out.sample_rate = sample_rate;
  const int n = static_cast<int>(std::lround(seconds * sample_rate));
  out.samples.assign(static_cast<size_t>(n), 0.0);

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const int seg = sample_rate / 4;  // 250 ms burst grid
  for (int start = 0; start < n; start += seg) {
    if (unif(rng) > 0.65) continue;  // pause
    const bool voiced = unif(rng) < 0.7;
    const int len = std::min(seg, n - start);
    if (voiced) {
      // Two-pole resonator excited by white noise; roaming center frequency
      // gives a crude formant-like spectrum.  A low-level direct noise term
      // keeps the burst broadband, like the glottal harmonics and aspiration
      // that sit under real formants.
      const double f0 = 300.0 + 2200.0 * unif(rng);
      const double r = 0.97;
      const double w = 2.0 * M_PI * f0 / sample_rate;
      const double a1 = -2.0 * r * std::cos(w);
      const double a2 = r * r;
      double y1 = 0.0, y2 = 0.0;
      for (int i = 0; i < len; ++i) {
        const double env =
            0.5 * (1.0 - std::cos(2.0 * M_PI * (i + 0.5) / len));  // hann
        const double ex = gauss(rng);
        const double y = ex - a1 * y1 - a2 * y2;
        y2 = y1;
        y1 = y;
        out.samples[static_cast<size_t>(start + i)] =
            0.03 * env * (y + 2.0 * ex);
      }
    } else {
      // Fricative-like burst: high-emphasis noise, a few dB below the
      // voiced level.
      double g1 = 0.0;
      for (int i = 0; i < len; ++i) {
        const double env = 0.5 * (1.0 - std::cos(2.0 * M_PI * (i + 0.5) / len));
        const double g = gauss(rng);
        out.samples[static_cast<size_t>(start + i)] =
            0.05 * env * (g - 0.7 * g1);
        g1 = g;
      }
    }
  }
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.5) {
    for (double& v : out.samples) v *= 0.5 / peak;
  }
  return out;
}

std::vector<ManifestEntry> ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("ReadManifest: cannot open " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  auto parse_db = [](const std::string& tok) {
    if (tok == "inf") return kInf;
    if (tok == "-inf") return -kInf;
    try {
      return std::stod(tok);
    } catch (const std::exception&) {
      throw IoError("ReadManifest: bad level field: " + tok);
    }
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    ManifestEntry e;
    std::string ser, snr, rser, rsnr;
    int nl = 0;
    if (!(is >> e.name >> e.scenario >> ser >> snr >> nl >> e.seed >> rser >>
          rsnr >> e.d >> e.s >> e.z >> e.v >> e.x)) {
      throw IoError("ReadManifest: malformed record: " + line);
    }
    e.ser_db = parse_db(ser);
    e.snr_db = parse_db(snr);
    e.nonlinear = nl != 0;
    e.realized_ser_db = parse_db(rser);
    e.realized_snr_db = parse_db(rsnr);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace fbaec
