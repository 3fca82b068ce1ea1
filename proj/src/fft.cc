// src/fft.cc

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

#include "fbaec/fft.h"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace fbaec {
namespace {
// FFTW's planner is not reentrant; plan creation/destruction is serialized.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  double* real_buf = nullptr;
  fftw_complex* cplx_buf = nullptr;
};

RealFft::RealFft(int n) : impl_(new Impl), n_(n) {
  if (n < 2) throw std::invalid_argument("RealFft: size must be >= 2");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  impl_->real_buf = fftw_alloc_real(static_cast<size_t>(n));
  impl_->cplx_buf = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
  impl_->fwd = fftw_plan_dft_r2c_1d(n, impl_->real_buf, impl_->cplx_buf,
                                    FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_1d(n, impl_->cplx_buf, impl_->real_buf,
                                    FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real_buf);
  fftw_free(impl_->cplx_buf);
  delete impl_;
}

void RealFft::Forward(const double* in, std::complex<double>* out) {
  std::memcpy(impl_->real_buf, in, sizeof(double) * static_cast<size_t>(n_));
  fftw_execute(impl_->fwd);
  // std::complex<double> is layout-compatible with double[2].
  for (int i = 0; i < num_bins(); ++i) {
    out[i] = {impl_->cplx_buf[i][0], impl_->cplx_buf[i][1]};
  }
}

void RealFft::Inverse(const std::complex<double>* in, double* out) {
  for (int i = 0; i < num_bins(); ++i) {
    impl_->cplx_buf[i][0] = in[i].real();
    impl_->cplx_buf[i][1] = in[i].imag();
  }
  fftw_execute(impl_->inv);
  const double scale = 1.0 / n_;
  for (int i = 0; i < n_; ++i) out[i] = impl_->real_buf[i] * scale;
}

std::vector<std::complex<double>> RealFft::Forward(
    const std::vector<double>& in) {
  if (static_cast<int>(in.size()) != n_) {
    throw std::invalid_argument("RealFft::Forward: length mismatch");
  }
  std::vector<std::complex<double>> out(static_cast<size_t>(num_bins()));
  Forward(in.data(), out.data());
  return out;
}

std::vector<double> RealFft::Inverse(
    const std::vector<std::complex<double>>& in) {
  if (static_cast<int>(in.size()) != num_bins()) {
    throw std::invalid_argument("RealFft::Inverse: length mismatch");
  }
  std::vector<double> out(static_cast<size_t>(n_));
  Inverse(in.data(), out.data());
  return out;
}

}  // namespace fbaec
