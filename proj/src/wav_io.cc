// src/wav_io.cc

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

#include "fbaec/wav_io.h"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace fbaec {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string* s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU16(std::string* s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xFF));
  s->push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

AudioBuffer ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path);
  }

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t* data = nullptr;
  uint32_t data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    uint32_t chunk_len = ReadU32(chunk + 4);
    const uint8_t* body = chunk + 8;
    if (pos + 8 + chunk_len > bytes.size()) {
      chunk_len = static_cast<uint32_t>(bytes.size() - pos - 8);
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0 && chunk_len >= 16) {
      format = ReadU16(body);
      channels = ReadU16(body + 2);
      rate = ReadU32(body + 4);
      bits = ReadU16(body + 14);
      if (format == kFormatExtensible && chunk_len >= 40) {
        format = ReadU16(body + 24);  // first two bytes of the sub-format GUID
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = body;
      data_len = chunk_len;
    }
    pos += 8 + chunk_len + (chunk_len & 1);
  }

  if (data == nullptr || rate == 0) throw IoError("malformed WAV: " + path);
  if (channels != 1) {
    throw IoError("only mono WAV supported (" + path + " has " +
                  std::to_string(channels) + " channels)");
  }

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    const uint32_t n = data_len / 2;
    buf.samples.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
      int16_t v = static_cast<int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
      buf.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const uint32_t n = data_len / 4;
    buf.samples.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
      uint32_t u = ReadU32(data + 4 * i);
      float f;
      std::memcpy(&f, &u, 4);
      buf.samples[i] = static_cast<double>(f);
    }
  } else {
    throw IoError("unsupported WAV codec (format " + std::to_string(format) +
                  ", " + std::to_string(bits) + " bit): " + path);
  }
  ValidateAudio(buf, path);
  return buf;
}

void WriteWav(const std::string& path, const AudioBuffer& buf,
              WavFormat format) {
  const uint16_t fmt_tag = format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat;
  const uint16_t bytes_per_sample = format == WavFormat::kPcm16 ? 2 : 4;
  const uint32_t data_len =
      static_cast<uint32_t>(buf.samples.size()) * bytes_per_sample;

  std::string out;
  out.reserve(44 + data_len);
  out.append("RIFF");
  PutU32(&out, 36 + data_len);
  out.append("WAVE");
  out.append("fmt ");
  PutU32(&out, 16);
  PutU16(&out, fmt_tag);
  PutU16(&out, 1);  // mono
  PutU32(&out, static_cast<uint32_t>(buf.sample_rate));
  PutU32(&out, static_cast<uint32_t>(buf.sample_rate) * bytes_per_sample);
  PutU16(&out, bytes_per_sample);
  PutU16(&out, static_cast<uint16_t>(8 * bytes_per_sample));
  out.append("data");
  PutU32(&out, data_len);

  for (double v : buf.samples) {
    double c = std::clamp(v, -1.0, 1.0);
    if (format == WavFormat::kPcm16) {
      int s = static_cast<int>(std::lrint(c * 32767.0));
      PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(s)));
    } else {
      float f = static_cast<float>(c);
      uint32_t u;
      std::memcpy(&u, &f, 4);
      PutU32(&out, u);
    }
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for write: " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("short write: " + path);
}

}  // namespace fbaec
