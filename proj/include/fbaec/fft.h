// include/fbaec/fft.h

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

#ifndef FBAEC_FFT_H_
#define FBAEC_FFT_H_

#include <complex>
#include <vector>

namespace fbaec {

// Real-input FFT of a fixed size, backed by FFTW (double precision).
// Forward maps n reals to n/2+1 complex bins; Inverse maps back and applies
// the 1/n normalization, so Inverse(Forward(x)) == x.
//
// Each instance owns its plans and scratch buffers: share nothing across
// threads; distinct instances are safe in parallel.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  int num_bins() const { return n_ / 2 + 1; }

  void Forward(const double* in, std::complex<double>* out);
  void Inverse(const std::complex<double>* in, double* out);

  std::vector<std::complex<double>> Forward(const std::vector<double>& in);
  std::vector<double> Inverse(const std::vector<std::complex<double>>& in);

 private:
  struct Impl;
  Impl* impl_;
  int n_;
};

}  // namespace fbaec

#endif  // FBAEC_FFT_H_
