// tests/oracles.h

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

// Slow, independent reference implementations the tests check the library
// against.  Everything here is deliberately naive (O(N^2) transforms,
// brute-force scans, dense solvers) and shares no code with src/.

#ifndef FBAEC_TESTS_ORACLES_H_
#define FBAEC_TESTS_ORACLES_H_

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracles {

constexpr double kPi = 3.14159265358979323846;

// Direct O(N^2) DFT, bins 0..N/2 of a real input.
inline std::vector<std::complex<double>> NaiveRealDft(
    const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      const double ang = -2.0 * kPi * k * i / n;
      acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

// Direct inverse of a half-spectrum (Hermitian extension), length n output.
inline std::vector<double> NaiveRealIdft(
    const std::vector<std::complex<double>>& bins, int n) {
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const std::complex<double> v =
          k <= n / 2 ? bins[k] : std::conj(bins[n - k]);
      const double ang = 2.0 * kPi * k * i / n;
      acc += (v * std::complex<double>(std::cos(ang), std::sin(ang))).real();
    }
    out[i] = acc / n;
  }
  return out;
}

// Brute-force delay search: argmax over lag in [0, max_lag] of the
// normalized cross-correlation  sum x[i] d[i+lag].
inline int BruteForceDelay(const std::vector<double>& x,
                           const std::vector<double>& d, int max_lag) {
  int best_lag = 0;
  double best = -1.0;
  const int n = static_cast<int>(std::min(x.size(), d.size()));
  for (int lag = 0; lag <= max_lag; ++lag) {
    double num = 0.0, ex = 0.0, ed = 0.0;
    for (int i = 0; i + lag < n; ++i) {
      num += x[i] * d[i + lag];
      ex += x[i] * x[i];
      ed += d[i + lag] * d[i + lag];
    }
    const double denom = std::sqrt(ex * ed);
    const double score = denom > 0.0 ? std::fabs(num) / denom : 0.0;
    if (score > best) {
      best = score;
      best_lag = lag;
    }
  }
  return best_lag;
}

// Exact batch least-squares FIR fit of d ~ h * x (zero initial history),
// via dense normal equations.  Returns the taps.
inline std::vector<double> BatchLsFir(const std::vector<double>& x,
                                      const std::vector<double>& d, int taps) {
  const int n = static_cast<int>(d.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(taps, taps);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(taps);
  std::vector<double> row(taps, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = taps - 1; j > 0; --j) row[j] = row[j - 1];
    row[0] = x[i];
    for (int p = 0; p < taps; ++p) {
      b(p) += row[p] * d[i];
      for (int q = 0; q <= p; ++q) a(p, q) += row[p] * row[q];
    }
  }
  for (int p = 0; p < taps; ++p)
    for (int q = p + 1; q < taps; ++q) a(p, q) = a(q, p);
  Eigen::VectorXd h = a.ldlt().solve(b);
  return std::vector<double>(h.data(), h.data() + taps);
}

inline std::vector<double> FirFilter(const std::vector<double>& x,
                                     const std::vector<double>& h, int out_len) {
  std::vector<double> y(out_len, 0.0);
  for (int i = 0; i < out_len; ++i) {
    double acc = 0.0;
    for (int k = 0; k < static_cast<int>(h.size()) && k <= i; ++k) {
      acc += h[k] * x[i - k];
    }
    y[i] = acc;
  }
  return y;
}

// Per-bin complex least squares of D(t) ~ w^H [X(t) .. X(t-L+1)], the
// growing-window solution an RLS with lambda = 1 converges to.  Rows are
// T x F complex matrices stored row-major (frame-major).
struct PerBinLsResult {
  // Residual energy and |D|^2 energy restricted to frames >= first_frame.
  double residual_energy = 0.0;
  double d_energy = 0.0;
};

inline PerBinLsResult PerBinBatchLs(
    const std::vector<std::complex<double>>& x,
    const std::vector<std::complex<double>>& d, int num_frames, int num_bins,
    int history, int first_frame) {
  using Cplx = std::complex<double>;
  PerBinLsResult res;
  for (int f = 0; f < num_bins; ++f) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(history, history);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(history);
    std::vector<Cplx> hist(history, Cplx(0.0, 0.0));
    // Normal equations  A w = b  for  min sum |d - w^H h|^2  with
    // A = sum h h^H, b = sum h conj(d).
    for (int t = 0; t < num_frames; ++t) {
      for (int j = history - 1; j > 0; --j) hist[j] = hist[j - 1];
      hist[0] = x[static_cast<size_t>(t) * num_bins + f];
      const Cplx dt = d[static_cast<size_t>(t) * num_bins + f];
      for (int p = 0; p < history; ++p) {
        b(p) += hist[p] * std::conj(dt);
        for (int q = 0; q < history; ++q) a(p, q) += hist[p] * std::conj(hist[q]);
      }
    }
    a += 1e-12 * Eigen::MatrixXcd::Identity(history, history);
    Eigen::VectorXcd w = a.ldlt().solve(b);
    std::fill(hist.begin(), hist.end(), Cplx(0.0, 0.0));
    for (int t = 0; t < num_frames; ++t) {
      for (int j = history - 1; j > 0; --j) hist[j] = hist[j - 1];
      hist[0] = x[static_cast<size_t>(t) * num_bins + f];
      Cplx y(0.0, 0.0);
      for (int p = 0; p < history; ++p) y += std::conj(w(p)) * hist[p];
      const Cplx dt = d[static_cast<size_t>(t) * num_bins + f];
      if (t >= first_frame) {
        res.residual_energy += std::norm(dt - y);
        res.d_energy += std::norm(dt);
      }
    }
  }
  return res;
}

// Schroeder backward integral of an impulse response, in dB re total energy.
inline std::vector<double> SchroederDecayDb(const std::vector<double>& h) {
  const int n = static_cast<int>(h.size());
  std::vector<double> edc(n, 0.0);
  double acc = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    acc += h[i] * h[i];
    edc[i] = acc;
  }
  const double total = edc.empty() ? 0.0 : edc[0];
  for (int i = 0; i < n; ++i) {
    edc[i] = total > 0.0 ? 10.0 * std::log10(std::max(edc[i] / total, 1e-30))
                         : -300.0;
  }
  return edc;
}

// First sample index where the Schroeder curve drops below level_db.
inline int SchroederCrossing(const std::vector<double>& h, double level_db) {
  const std::vector<double> edc = SchroederDecayDb(h);
  for (int i = 0; i < static_cast<int>(edc.size()); ++i) {
    if (edc[i] < level_db) return i;
  }
  return static_cast<int>(edc.size());
}

// Single-bin DFT power at frequency hz (Goertzel-style direct sum).
inline double TonePower(const std::vector<double>& x, double hz,
                        int sample_rate) {
  std::complex<double> acc(0.0, 0.0);
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    const double ang = -2.0 * kPi * hz * i / sample_rate;
    acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return std::norm(acc) / (static_cast<double>(n) * n);
}

// Total harmonic distortion of a tone at f0: harmonic power (2..max_k) over
// fundamental power, as an amplitude ratio.
inline double Thd(const std::vector<double>& x, double f0, int sample_rate,
                  int max_k = 10) {
  const double fund = TonePower(x, f0, sample_rate);
  double harm = 0.0;
  for (int k = 2; k <= max_k; ++k) {
    if (f0 * k >= sample_rate / 2.0) break;
    harm += TonePower(x, f0 * k, sample_rate);
  }
  return fund > 0.0 ? std::sqrt(harm / fund) : 0.0;
}

inline double EnergyOf(const std::vector<double>& v) {
  double acc = 0.0;
  for (double s : v) acc += s * s;
  return acc;
}

inline double RmsDb(const std::vector<double>& err,
                    const std::vector<double>& ref) {
  const double ee = EnergyOf(err);
  const double er = EnergyOf(ref);
  if (er <= 0.0) return ee <= 0.0 ? -300.0 : 300.0;
  return 10.0 * std::log10(std::max(ee / er, 1e-30));
}

inline std::vector<double> WhiteNoise(int n, uint32_t seed, double sigma = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  std::vector<double> out(n);
  for (double& v : out) v = dist(rng);
  return out;
}

}  // namespace oracles

#endif  // FBAEC_TESTS_ORACLES_H_
