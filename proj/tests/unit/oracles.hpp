#pragma once

// Test-side reference computations, written without the library so the
// checks do not share code paths with what they check.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<double> tone(std::size_t n, double freq, double fs, double amp = 1.0, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = amp * std::sin(2 * kPi * freq * static_cast<double>(k) / fs + phase);
  return x;
}

/// Plain DFT coefficient at integer bin m (no window, no scaling).
inline std::complex<double> dft_bin(std::span<const double> x, std::size_t m) {
  std::complex<double> acc;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double ang = -2 * kPi * static_cast<double>(m) * static_cast<double>(k) / n;
    acc += x[k] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc;
}

inline double bin_power(std::span<const double> x, std::size_t m) { return std::norm(dft_bin(x, m)); }

/// Index of the strongest bin in [1, N/2).
inline std::size_t peak_bin(std::span<const double> x) {
  std::size_t best = 1;
  double best_p = -1.0;
  for (std::size_t m = 1; m < x.size() / 2; ++m) {
    const double p = bin_power(x, m);
    if (p > best_p) {
      best_p = p;
      best = m;
    }
  }
  return best;
}

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

inline double mean_square(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

inline double rms_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

inline double correlation(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a), mb = mean(b);
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += (a[k] - ma) * (b[k] - mb);
    aa += (a[k] - ma) * (a[k] - ma);
    bb += (b[k] - mb) * (b[k] - mb);
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace oracle
