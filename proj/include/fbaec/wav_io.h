// include/fbaec/wav_io.h

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

#ifndef FBAEC_WAV_IO_H_
#define FBAEC_WAV_IO_H_

#include <string>

#include "fbaec/common.h"

namespace fbaec {

enum class WavFormat { kPcm16, kFloat32 };

// Reads a mono RIFF/WAVE file (PCM 16-bit or IEEE float-32).  Multi-channel
// files and unsupported codecs are rejected.  Non-finite float samples are
// rejected at ingest.
AudioBuffer ReadWav(const std::string& path);

// Writes a mono WAV file.  Out-of-range samples are clamped to [-1, 1] on
// write for both formats.
void WriteWav(const std::string& path, const AudioBuffer& buf,
              WavFormat format = WavFormat::kFloat32);

}  // namespace fbaec

#endif  // FBAEC_WAV_IO_H_
