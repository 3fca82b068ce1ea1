// tools/fbaec.cc

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

// Command-line front end:
//   fbaec process  --mic in.wav --ref ref.wav --out out.wav [options]
//   fbaec eval     --manifest dir/manifest.txt [options]
//   fbaec simulate --out-dir dir [--seed N] [options]
// Exit codes: 0 ok, 1 usage/config, 2 I/O, 3 model load.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fbaec/metrics.h"
#include "fbaec/pipeline.h"
#include "fbaec/simulate.h"
#include "fbaec/wav_io.h"

namespace {

using fbaec::AudioBuffer;
using fbaec::ConfigError;
using fbaec::IoError;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitModel = 3;

void RequireKeys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ConfigError("config: unknown key '" + key + "' in " + where);
  }
}

// JSON config with a fixed key set; unknown keys are errors so typos do not
// silently fall back to defaults.
void ApplyConfigFile(const std::string& path, fbaec::PipelineConfig* cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: parse failure in " + path + ": " + e.what());
  }
  RequireKeys(j,
              {"filter", "tde", "combo", "model", "subband", "model_channels",
               "compress_power", "stft", "mdf", "wrls", "tde_cfg", "gain_band"},
              "top level");
  if (j.contains("filter")) {
    cfg->filter = fbaec::ParseFilterKind(j["filter"].get<std::string>());
  }
  if (j.contains("tde")) cfg->tde_enabled = j["tde"].get<bool>();
  if (j.contains("combo")) {
    cfg->combo = fbaec::ParseCombo(j["combo"].get<std::string>());
  }
  if (j.contains("model")) cfg->model_path = j["model"].get<std::string>();
  if (j.contains("subband")) cfg->subband = j["subband"].get<bool>();
  if (j.contains("model_channels")) {
    cfg->model_channels = j["model_channels"].get<int>();
  }
  if (j.contains("compress_power")) {
    cfg->compress_power = j["compress_power"].get<double>();
  }
  if (j.contains("stft")) {
    const json& s = j["stft"];
    RequireKeys(s, {"win_length", "hop", "fft_size"}, "stft");
    if (s.contains("win_length")) cfg->stft.win_length = s["win_length"].get<int>();
    if (s.contains("hop")) cfg->stft.hop = s["hop"].get<int>();
    if (s.contains("fft_size")) cfg->stft.fft_size = s["fft_size"].get<int>();
  }
  if (j.contains("mdf")) {
    const json& m = j["mdf"];
    RequireKeys(m, {"block", "tail_ms", "mu", "delta"}, "mdf");
    if (m.contains("block")) cfg->mdf.block = m["block"].get<int>();
    if (m.contains("tail_ms")) cfg->mdf.tail_ms = m["tail_ms"].get<double>();
    if (m.contains("mu")) cfg->mdf.mu = m["mu"].get<double>();
    if (m.contains("delta")) cfg->mdf.delta = m["delta"].get<double>();
  }
  if (j.contains("wrls")) {
    const json& w = j["wrls"];
    RequireKeys(w, {"history", "lambda", "delta_init"}, "wrls");
    if (w.contains("history")) cfg->wrls.history = w["history"].get<int>();
    if (w.contains("lambda")) cfg->wrls.lambda = w["lambda"].get<double>();
    if (w.contains("delta_init")) {
      cfg->wrls.delta_init = w["delta_init"].get<double>();
    }
  }
  if (j.contains("tde_cfg")) {
    const json& t = j["tde_cfg"];
    RequireKeys(t,
                {"block", "fft_size", "max_delay", "smoothing",
                 "confidence_threshold"},
                "tde_cfg");
    if (t.contains("block")) cfg->tde.block = t["block"].get<int>();
    if (t.contains("fft_size")) cfg->tde.fft_size = t["fft_size"].get<int>();
    if (t.contains("max_delay")) cfg->tde.max_delay = t["max_delay"].get<int>();
    if (t.contains("smoothing")) {
      cfg->tde.smoothing = t["smoothing"].get<double>();
    }
    if (t.contains("confidence_threshold")) {
      cfg->tde.confidence_threshold = t["confidence_threshold"].get<double>();
    }
  }
  if (j.contains("gain_band")) {
    const json& g = j["gain_band"];
    RequireKeys(g, {"a", "b", "c", "d"}, "gain_band");
    if (g.contains("a")) cfg->gain_band.a = g["a"].get<int>();
    if (g.contains("b")) cfg->gain_band.b = g["b"].get<int>();
    if (g.contains("c")) cfg->gain_band.c = g["c"].get<int>();
    if (g.contains("d")) cfg->gain_band.d = g["d"].get<int>();
  }
}

std::string FormatDbCell(double v) {
  if (v == fbaec::kInfDb) return "inf";
  if (v == -fbaec::kInfDb) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct CommonOpts {
  std::string config_path;
  std::string filter;
  std::string tde;
  std::string combo;
  std::string model;
  std::string subband;
};

void AddCommonOptions(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "JSON config file");
  cmd->add_option("--filter", opts->filter, "none|mdf|wrls")
      ->check(CLI::IsMember({"none", "mdf", "wrls"}));
  cmd->add_option("--tde", opts->tde, "on|off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--combo", opts->combo, "dx|ex|dey")
      ->check(CLI::IsMember({"dx", "ex", "dey"}));
  cmd->add_option("--model", opts->model, "weight container path");
  cmd->add_option("--subband", opts->subband,
                  "on (48 kHz full band) | off (16 kHz wide band)")
      ->check(CLI::IsMember({"on", "off"}));
}

fbaec::PipelineConfig BuildConfig(const CommonOpts& opts) {
  fbaec::PipelineConfig cfg;
  if (!opts.config_path.empty()) ApplyConfigFile(opts.config_path, &cfg);
  // Explicit flags win over file values.
  if (!opts.filter.empty()) cfg.filter = fbaec::ParseFilterKind(opts.filter);
  if (!opts.tde.empty()) cfg.tde_enabled = opts.tde == "on";
  if (!opts.combo.empty()) cfg.combo = fbaec::ParseCombo(opts.combo);
  if (!opts.model.empty()) cfg.model_path = opts.model;
  if (!opts.subband.empty()) cfg.subband = opts.subband == "on";
  cfg.Validate();
  return cfg;
}

int RunProcess(const CommonOpts& common, const std::string& mic_path,
               const std::string& ref_path, const std::string& out_path) {
  fbaec::PipelineConfig cfg = BuildConfig(common);
  fbaec::Pipeline pipeline(cfg);
  AudioBuffer mic = fbaec::ReadWav(mic_path);
  AudioBuffer ref = fbaec::ReadWav(ref_path);
  fbaec::RunReport report;
  AudioBuffer out = pipeline.Process(mic, ref, &report);
  fbaec::WriteWav(out_path, out, fbaec::WavFormat::kPcm16);
  std::cout << report.ToText();
  return kExitOk;
}

int RunEval(const CommonOpts& common, const std::string& manifest_path,
            std::string table_path) {
  fbaec::PipelineConfig cfg = BuildConfig(common);
  fbaec::Pipeline pipeline(cfg);
  const std::vector<fbaec::ManifestEntry> entries =
      fbaec::ReadManifest(manifest_path);
  const std::filesystem::path base =
      std::filesystem::path(manifest_path).parent_path();
  if (table_path.empty()) {
    table_path = (base / "eval_results.tsv").string();
  }

  struct Row {
    std::string name, scenario, ser, snr, rser, rsnr, erle;
  };
  std::vector<Row> rows;
  for (const fbaec::ManifestEntry& e : entries) {
    AudioBuffer d = fbaec::ReadWav((base / e.d).string());
    AudioBuffer x = fbaec::ReadWav((base / e.x).string());
    AudioBuffer s_hat = pipeline.Process(d, x, nullptr);
    Row row;
    row.name = e.name;
    row.scenario = e.scenario;
    row.ser = FormatDbCell(e.ser_db);
    row.snr = FormatDbCell(e.snr_db);
    row.rser = FormatDbCell(e.realized_ser_db);
    row.rsnr = FormatDbCell(e.realized_snr_db);
    if (e.scenario == "st_fe") {
      fbaec::ErleResult erle = fbaec::Erle(d, s_hat);
      row.erle = FormatDbCell(erle.erle_db);
    } else {
      row.erle = "-";  // scored externally (perceptual metrics)
    }
    rows.push_back(std::move(row));
  }

  const char* headers[] = {"condition",    "scenario",     "ser_db",
                           "snr_db",       "realized_ser", "realized_snr",
                           "erle_db"};
  size_t width[7] = {};
  for (int i = 0; i < 7; ++i) width[i] = std::string(headers[i]).size();
  for (const Row& r : rows) {
    const std::string* cells[7] = {&r.name, &r.scenario, &r.ser,  &r.snr,
                                   &r.rser, &r.rsnr,     &r.erle};
    for (int i = 0; i < 7; ++i) width[i] = std::max(width[i], cells[i]->size());
  }
  std::ostringstream text;
  std::ostringstream tsv;
  for (int i = 0; i < 7; ++i) {
    text << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i]))
         << headers[i];
    tsv << (i ? "\t" : "") << headers[i];
  }
  text << '\n';
  tsv << '\n';
  for (const Row& r : rows) {
    const std::string* cells[7] = {&r.name, &r.scenario, &r.ser,  &r.snr,
                                   &r.rser, &r.rsnr,     &r.erle};
    for (int i = 0; i < 7; ++i) {
      text << (i ? "  " : "")
           << std::left << std::setw(static_cast<int>(width[i])) << *cells[i];
      tsv << (i ? "\t" : "") << *cells[i];
    }
    text << '\n';
    tsv << '\n';
  }
  std::cout << text.str();
  std::ofstream tf(table_path, std::ios::binary);
  if (!tf) throw IoError("eval: cannot write " + table_path);
  tf << tsv.str();
  return kExitOk;
}

int RunSimulate(const std::string& out_dir, uint32_t seed, double seconds,
                int rate, bool nonlinear, const std::string& near_path,
                const std::string& far_path) {
  AudioBuffer s_src = near_path.empty()
                          ? fbaec::SynthSpeechLike(seconds, rate, seed * 2 + 1)
                          : fbaec::ReadWav(near_path);
  AudioBuffer x_src = far_path.empty()
                          ? fbaec::SynthSpeechLike(seconds, rate, seed * 2 + 2)
                          : fbaec::ReadWav(far_path);
  fbaec::TestSetOptions opts;
  opts.chunk_seconds = seconds;
  std::vector<fbaec::MixSpec> grid = fbaec::DefaultGrid(seed, nonlinear);
  const std::string manifest =
      fbaec::BuildTestSet(s_src, x_src, grid, out_dir, opts);
  std::cout << manifest << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-band acoustic echo canceller"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string mic_path, ref_path, out_path;
  CLI::App* process = app.add_subcommand("process", "Cancel echo in one file");
  process->add_option("--mic", mic_path, "microphone WAV")->required();
  process->add_option("--ref", ref_path, "far-end reference WAV")->required();
  process->add_option("--out", out_path, "output WAV")->required();
  AddCommonOptions(process, &common);

  std::string manifest_path, table_path;
  CLI::App* eval = app.add_subcommand("eval", "Score a simulated test set");
  eval->add_option("--manifest", manifest_path, "manifest.txt path")
      ->required();
  eval->add_option("--out", table_path, "delimited results path");
  AddCommonOptions(eval, &common);

  std::string out_dir, near_path, far_path, grid_name = "default";
  uint32_t seed = 1;
  double seconds = 10.0;
  int rate = 16000;
  bool nonlinear = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Render the test grid");
  simulate->add_option("--out-dir", out_dir, "output directory")->required();
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_option("--seconds", seconds, "chunk length");
  simulate->add_option("--rate", rate, "sample rate")
      ->check(CLI::IsMember({16000, 48000}));
  simulate->add_flag("--nonlinear", nonlinear, "clip the loudspeaker path");
  simulate->add_option("--near", near_path, "near-end source WAV (optional)");
  simulate->add_option("--far", far_path, "far-end source WAV (optional)");
  simulate->add_option("--grid", grid_name, "condition grid")
      ->check(CLI::IsMember({"default"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (process->parsed()) {
      return RunProcess(common, mic_path, ref_path, out_path);
    }
    if (eval->parsed()) return RunEval(common, manifest_path, table_path);
    if (simulate->parsed()) {
      return RunSimulate(out_dir, seed, seconds, rate, nonlinear, near_path,
                         far_path);
    }
  } catch (const fbaec::ModelLoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitModel;
  } catch (const fbaec::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
