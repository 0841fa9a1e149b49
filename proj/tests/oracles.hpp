// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Brute-force reference implementations used only by the tests. They follow
// the textbook definitions literally and share no code with the library.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

inline double PeriodicHann(std::size_t n, std::size_t len) {
  return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(n) / double(len));
}

/// Canonical dual window: w(n) divided by the sum of w(n + k hop)^2 over every
/// integer k that keeps the index inside the window.
inline std::vector<double> DualWindow(const std::vector<double>& w, std::size_t hop) {
  const long len = static_cast<long>(w.size());
  std::vector<double> out(w.size());
  for (long n = 0; n < len; ++n) {
    double energy = 0.0;
    for (long k = -len; k <= len; ++k) {
      const long m = n + k * static_cast<long>(hop);
      if (m >= 0 && m < len) energy += w[m] * w[m];
    }
    out[n] = w[n] / energy;
  }
  return out;
}

/// X(k) = sum_n x(n) exp(-2 pi i k n / N), k = 0 .. N/2.
inline std::vector<cd> NaiveDft(const std::vector<double>& x, std::size_t n_dft) {
  std::vector<cd> out(n_dft / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    cd acc = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double arg = -2.0 * std::numbers::pi * double((k * n) % n_dft) / double(n_dft);
      acc += x[n] * cd(std::cos(arg), std::sin(arg));
    }
    out[k] = acc;
  }
  return out;
}

/// Inverse DFT of the Hermitian extension of a one-sided spectrum.
inline std::vector<double> NaiveIdft(const std::vector<cd>& half, std::size_t n_dft) {
  std::vector<cd> full(n_dft);
  for (std::size_t k = 0; k < n_dft; ++k)
    full[k] = k < half.size() ? half[k] : std::conj(half[n_dft - k]);
  std::vector<double> out(n_dft);
  for (std::size_t n = 0; n < n_dft; ++n) {
    cd acc = 0.0;
    for (std::size_t k = 0; k < n_dft; ++k) {
      const double arg = 2.0 * std::numbers::pi * double((k * n) % n_dft) / double(n_dft);
      acc += full[k] * cd(std::cos(arg), std::sin(arg));
    }
    out[n] = acc.real() / double(n_dft);
  }
  return out;
}

/// STFT as a double loop over frames and bins.
inline std::vector<std::vector<cd>> NaiveStft(const std::vector<double>& x,
                                              const std::vector<double>& window,
                                              std::size_t hop, std::size_t n_dft) {
  const std::size_t n_w = window.size();
  std::vector<std::vector<cd>> frames;
  for (std::size_t start = 0; start + n_w <= x.size(); start += hop) {
    std::vector<double> seg(n_w);
    for (std::size_t m = 0; m < n_w; ++m) seg[m] = x[start + m] * window[m];
    frames.push_back(NaiveDft(seg, n_dft));
  }
  return frames;
}

/// Literal overlap-add: s(n) = sum_t s'_t(n - t hop).
inline std::vector<double> NaiveOla(const std::vector<std::vector<cd>>& frames,
                                    const std::vector<double>& synthesis,
                                    std::size_t hop, std::size_t n_dft) {
  const std::size_t n_w = synthesis.size();
  const std::size_t len = frames.empty() ? 0 : (frames.size() - 1) * hop + n_w;
  std::vector<std::vector<double>> contrib;
  for (const auto& f : frames) {
    auto full = NaiveIdft(f, n_dft);
    std::vector<double> c(n_w);
    for (std::size_t m = 0; m < n_w; ++m) c[m] = full[m] * synthesis[m];
    contrib.push_back(c);
  }
  std::vector<double> out(len, 0.0);
  for (std::size_t n = 0; n < len; ++n)
    for (std::size_t t = 0; t < contrib.size(); ++t)
      if (n >= t * hop && n - t * hop < n_w) out[n] += contrib[t][n - t * hop];
  return out;
}

inline std::vector<double> RandomSignal(std::mt19937_64& rng, std::size_t len,
                                        double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> x(len);
  for (double& v : x) v = dist(rng);
  return x;
}

}  // namespace oracle
