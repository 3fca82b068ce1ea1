// tests/cli_test.cc

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

// Spawns the installed command-line binary (path injected at compile time)
// and checks exit codes, outputs and determinism end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fbaec/net/gftnn.h"
#include "fbaec/net/weights.h"
#include "fbaec/wav_io.h"

#ifndef FBAEC_CLI_PATH
#error "FBAEC_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;

namespace {

const fs::path kWork = "/tmp/fbaec_cli_test";

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

CliResult RunCli(const std::vector<std::string>& args) {
  static int counter = 0;
  const fs::path out_path = kWork / ("stdout_" + std::to_string(counter));
  const fs::path err_path = kWork / ("stderr_" + std::to_string(counter));
  ++counter;

  std::ostringstream cmd;
  cmd << "'" << FBAEC_CLI_PATH << "'";
  for (const std::string& a : args) cmd << " '" << a << "'";
  cmd << " >'" << out_path.string() << "' 2>'" << err_path.string() << "'";

  CliResult r;
  const int status = std::system(cmd.str().c_str());
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFileBytes(out_path);
  r.err = ReadFileBytes(err_path);
  return r;
}

// Renders a small deterministic test set once and caches the directory.
const fs::path& Grid16k() {
  static const fs::path dir = [] {
    const fs::path d = kWork / "grid16";
    const CliResult r = RunCli({"simulate", "--out-dir", d.string(), "--seed",
                                "11", "--seconds", "2"});
    REQUIRE(r.exit_code == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("workspace setup") {
  fs::remove_all(kWork);
  fs::create_directories(kWork);
  CHECK(fs::exists(kWork));
}

TEST_CASE("usage and help") {
  CHECK(RunCli({}).exit_code == 1);
  const CliResult help = RunCli({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("process") != std::string::npos);
  CHECK(help.out.find("simulate") != std::string::npos);
  CHECK(RunCli({"transmogrify"}).exit_code == 1);
  CHECK(RunCli({"process"}).exit_code == 1);  // missing required options
}

TEST_CASE("simulate is deterministic across runs") {
  const fs::path a = kWork / "sim_a";
  const fs::path b = kWork / "sim_b";
  const CliResult ra = RunCli(
      {"simulate", "--out-dir", a.string(), "--seed", "3", "--seconds", "2"});
  const CliResult rb = RunCli(
      {"simulate", "--out-dir", b.string(), "--seed", "3", "--seconds", "2"});
  REQUIRE(ra.exit_code == 0);
  REQUIRE(rb.exit_code == 0);
  CHECK(ra.out.find("manifest.txt") != std::string::npos);
  const std::string man_a = ReadFileBytes(a / "manifest.txt");
  const std::string man_b = ReadFileBytes(b / "manifest.txt");
  REQUIRE(!man_a.empty());
  CHECK(man_a == man_b);
  CHECK(ReadFileBytes(a / "st_fe_ser5" / "d.wav") ==
        ReadFileBytes(b / "st_fe_ser5" / "d.wav"));
  // A different seed changes the audio.
  const fs::path c = kWork / "sim_c";
  REQUIRE(RunCli({"simulate", "--out-dir", c.string(), "--seed", "4",
                  "--seconds", "2"})
              .exit_code == 0);
  CHECK(ReadFileBytes(a / "st_fe_ser5" / "d.wav") !=
        ReadFileBytes(c / "st_fe_ser5" / "d.wav"));
}

TEST_CASE("process runs the dsp path and writes pcm16") {
  const fs::path& grid = Grid16k();
  const fs::path out = kWork / "processed.wav";
  const CliResult r = RunCli({"process", "--mic",
                              (grid / "st_fe_ser5" / "d.wav").string(),
                              "--ref", (grid / "st_fe_ser5" / "x.wav").string(),
                              "--out", out.string(), "--filter", "mdf",
                              "--tde", "on", "--subband", "off"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("filter=mdf") != std::string::npos);
  CHECK(r.out.find("rtf") != std::string::npos);

  const std::string bytes = ReadFileBytes(out);
  REQUIRE(bytes.size() > 44);
  CHECK(bytes.compare(0, 4, "RIFF") == 0);
  CHECK(bytes.compare(8, 4, "WAVE") == 0);
  // Format tag 1 = integer PCM.
  CHECK(bytes[20] == 1);
  CHECK(bytes[21] == 0);

  const fbaec::AudioBuffer mic =
      fbaec::ReadWav((grid / "st_fe_ser5" / "d.wav").string());
  const fbaec::AudioBuffer processed = fbaec::ReadWav(out.string());
  CHECK(processed.NumSamples() == mic.NumSamples());
  CHECK(processed.sample_rate == mic.sample_rate);
}

TEST_CASE("io failures exit with code 2") {
  const CliResult r = RunCli({"process", "--mic", "/tmp/absent_mic.wav",
                              "--ref", "/tmp/absent_ref.wav", "--out",
                              (kWork / "x.wav").string()});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("config file handling") {
  const fs::path& grid = Grid16k();
  const std::string mic = (grid / "st_fe_ser5" / "d.wav").string();
  const std::string ref = (grid / "st_fe_ser5" / "x.wav").string();
  const std::string out = (kWork / "cfg_out.wav").string();

  SUBCASE("unknown key is a config error") {
    const fs::path cfg = kWork / "bad_key.json";
    std::ofstream(cfg) << R"({"filtre": "mdf"})";
    CHECK(RunCli({"process", "--mic", mic, "--ref", ref, "--out", out,
                  "--config", cfg.string()})
              .exit_code == 1);
  }
  SUBCASE("missing config file is an io error") {
    CHECK(RunCli({"process", "--mic", mic, "--ref", ref, "--out", out,
                  "--config", (kWork / "absent.json").string()})
              .exit_code == 2);
  }
  SUBCASE("malformed json is a config error") {
    const fs::path cfg = kWork / "broken.json";
    std::ofstream(cfg) << "{ not json";
    CHECK(RunCli({"process", "--mic", mic, "--ref", ref, "--out", out,
                  "--config", cfg.string()})
              .exit_code == 1);
  }
  SUBCASE("explicit flags override the file") {
    const fs::path cfg = kWork / "wrls.json";
    std::ofstream(cfg)
        << R"({"filter": "wrls", "tde": false, "subband": false})";
    const CliResult r = RunCli({"process", "--mic", mic, "--ref", ref, "--out",
                                out, "--config", cfg.string(), "--filter",
                                "mdf"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("filter=mdf") != std::string::npos);
  }
  SUBCASE("file values apply when no flag is given") {
    const fs::path cfg = kWork / "wrls2.json";
    std::ofstream(cfg)
        << R"({"filter": "wrls", "tde": false, "subband": false})";
    const CliResult r = RunCli(
        {"process", "--mic", mic, "--ref", ref, "--out", out, "--config",
         cfg.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("filter=wrls") != std::string::npos);
  }
}

TEST_CASE("eval renders the table and tsv") {
  const fs::path& grid = Grid16k();
  const fs::path tsv = kWork / "results.tsv";
  const CliResult r = RunCli({"eval", "--manifest",
                              (grid / "manifest.txt").string(), "--out",
                              tsv.string(), "--filter", "mdf", "--tde", "on",
                              "--subband", "off"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("condition") != std::string::npos);
  CHECK(r.out.find("erle_db") != std::string::npos);
  CHECK(r.out.find("st_fe_ser5") != std::string::npos);

  const std::string table = ReadFileBytes(tsv);
  REQUIRE(!table.empty());
  std::istringstream lines(table);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line ==
        "condition\tscenario\tser_db\tsnr_db\trealized_ser\trealized_snr\terle_db");
  int rows = 0, fe_rows = 0, dash_rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream cells(line);
    std::vector<std::string> cols;
    std::string cell;
    while (std::getline(cells, cell, '\t')) cols.push_back(cell);
    REQUIRE(cols.size() == 7);
    if (cols[1] == "st_fe") {
      ++fe_rows;
      // Numeric ERLE for far-end single talk.
      CHECK_NOTHROW((void)std::stod(cols[6]));
    } else {
      CHECK(cols[6] == "-");
      ++dash_rows;
    }
  }
  CHECK(rows == 11);
  CHECK(fe_rows == 3);
  CHECK(dash_rows == 8);
}

TEST_CASE("eval of an empty manifest is a no-op success") {
  const fs::path dir = kWork / "empty_eval";
  fs::create_directories(dir);
  const fs::path manifest = dir / "manifest.txt";
  std::ofstream(manifest) << "# mixture manifest v1\n# header only\n";
  const CliResult r = RunCli({"eval", "--manifest", manifest.string(),
                              "--filter", "none", "--tde", "off", "--subband",
                              "off"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("condition") != std::string::npos);
  const std::string tsv = ReadFileBytes(dir / "eval_results.tsv");
  CHECK(tsv.find("condition\t") == 0);
  CHECK(tsv.find("\n") == tsv.size() - 1);  // header line only
}

TEST_CASE("garbage model file exits with code 3") {
  const fs::path& grid = Grid16k();
  const fs::path model = kWork / "garbage.gftw";
  std::ofstream(model) << "this is not a weight container";
  const CliResult r = RunCli({"process", "--mic",
                              (grid / "st_fe_ser5" / "d.wav").string(),
                              "--ref", (grid / "st_fe_ser5" / "x.wav").string(),
                              "--out", (kWork / "m.wav").string(), "--model",
                              model.string(), "--filter", "wrls", "--subband",
                              "off"});
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("neural path through the cli is deterministic") {
  const fs::path& grid = Grid16k();
  // A small random-weight model; channel width comes from the config file.
  fbaec::ModelArch arch;
  arch.channels = 12;
  arch.input_channels = 6;
  const fbaec::GftnnModel model = fbaec::GftnnModel::RandomInit(arch, 99);
  const fs::path weights = kWork / "small.gftw";
  fbaec::net::SaveWeights(weights.string(), model.weights());

  const fs::path cfg = kWork / "neural.json";
  std::ofstream(cfg) << R"({"filter": "wrls", "combo": "dey", "tde": false,
                            "subband": false, "model_channels": 12})";
  const fs::path out1 = kWork / "n1.wav";
  const fs::path out2 = kWork / "n2.wav";
  const std::string mic = (grid / "dt_ser-5_snr5" / "d.wav").string();
  const std::string ref = (grid / "dt_ser-5_snr5" / "x.wav").string();
  const CliResult r1 = RunCli({"process", "--mic", mic, "--ref", ref, "--out",
                               out1.string(), "--config", cfg.string(),
                               "--model", weights.string()});
  const CliResult r2 = RunCli({"process", "--mic", mic, "--ref", ref, "--out",
                               out2.string(), "--config", cfg.string(),
                               "--model", weights.string()});
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  const std::string b1 = ReadFileBytes(out1);
  REQUIRE(!b1.empty());
  CHECK(b1 == ReadFileBytes(out2));
}

TEST_CASE("full-band subband path at 48 kHz") {
  const fs::path dir = kWork / "grid48";
  const CliResult sim = RunCli({"simulate", "--out-dir", dir.string(),
                                "--seed", "21", "--seconds", "2", "--rate",
                                "48000"});
  REQUIRE(sim.exit_code == 0);
  const fs::path out = kWork / "fullband.wav";
  const CliResult r = RunCli({"process", "--mic",
                              (dir / "st_fe_ser5" / "d.wav").string(), "--ref",
                              (dir / "st_fe_ser5" / "x.wav").string(), "--out",
                              out.string(), "--filter", "mdf", "--tde", "on",
                              "--subband", "on"});
  REQUIRE(r.exit_code == 0);
  const fbaec::AudioBuffer processed = fbaec::ReadWav(out.string());
  CHECK(processed.sample_rate == 48000);
  CHECK(processed.NumSamples() == 96000);
}

TEST_CASE("workspace teardown") {
  fs::remove_all(kWork);
  CHECK(!fs::exists(kWork));
}
