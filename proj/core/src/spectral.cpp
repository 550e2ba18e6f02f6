#include "xtalk/spectral.hpp"

#include <cmath>
#include <numbers>

#include "xtalk/error.hpp"
#include "xtalk/matrix.hpp"

namespace xtalk {

using std::numbers::pi;

std::complex<double> windowed_dft(std::span<const double> x, double freq, double sample_rate) {
  if (x.size() < 2) throw InvalidArgument("windowed_dft: need at least 2 samples");
  const double n = static_cast<double>(x.size());
  const double w = 2.0 * pi * freq / sample_rate;
  std::complex<double> acc{0.0, 0.0};
  double wsum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double win = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(k) / (n - 1.0));
    const double ph = w * static_cast<double>(k);
    acc += win * x[k] * std::complex<double>(std::cos(ph), -std::sin(ph));
    wsum += win;
  }
  return acc / wsum;
}

std::vector<double> tone_powers(std::span<const double> x, double sample_rate,
                                std::span<const double> freqs) {
  const std::size_t m = 2 * freqs.size() + 1;
  if (x.size() < m) throw InvalidArgument("tone_powers: record shorter than model");
  Matrix ata(m, m);
  std::vector<double> atb(m, 0.0);
  std::vector<double> basis(m);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = static_cast<double>(k) / sample_rate;
    for (std::size_t f = 0; f < freqs.size(); ++f) {
      const double ph = 2.0 * pi * freqs[f] * t;
      basis[2 * f] = std::sin(ph);
      basis[2 * f + 1] = std::cos(ph);
    }
    basis[m - 1] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      atb[i] += basis[i] * x[k];
      for (std::size_t j = i; j < m; ++j) ata(i, j) += basis[i] * basis[j];
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) ata(i, j) = ata(j, i);
  const auto coef = multiply(inverse(ata), atb);
  std::vector<double> power(freqs.size());
  for (std::size_t f = 0; f < freqs.size(); ++f)
    power[f] = 0.5 * (coef[2 * f] * coef[2 * f] + coef[2 * f + 1] * coef[2 * f + 1]);
  return power;
}

}  // namespace xtalk
