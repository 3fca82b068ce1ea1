// include/fbaec/common.h

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

#ifndef FBAEC_COMMON_H_
#define FBAEC_COMMON_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbaec {

// Error taxonomy used across the library.  The CLI maps these onto exit
// codes (usage/config = 1, I/O = 2, model load = 3).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class ModelLoadError : public std::runtime_error {
 public:
  explicit ModelLoadError(const std::string& msg) : std::runtime_error(msg) {}
};

class ProcessError : public std::runtime_error {
 public:
  explicit ProcessError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mono time-domain signal.  Samples are nominally in [-1, 1]; NaN/Inf are
// rejected at ingest (WAV reader and explicit Validate calls).
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  AudioBuffer() = default;
  AudioBuffer(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  int NumSamples() const { return static_cast<int>(samples.size()); }
  double DurationSeconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

inline void ValidateAudio(const AudioBuffer& buf, const std::string& what) {
  if (buf.sample_rate <= 0) {
    throw ConfigError(what + ": sample rate must be positive");
  }
  for (double v : buf.samples) {
    if (!std::isfinite(v)) {
      throw ConfigError(what + ": non-finite sample rejected");
    }
  }
}

inline double SignalPower(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

inline double SignalEnergy(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

inline double PowerToDb(double p) {
  return 10.0 * std::log10(std::max(p, 1e-300));
}

constexpr double kInfDb = std::numeric_limits<double>::infinity();

}  // namespace fbaec

#endif  // FBAEC_COMMON_H_
