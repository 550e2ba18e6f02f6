#pragma once

#include <complex>
#include <span>
#include <vector>

namespace xtalk {

/// Hann-windowed single-bin DFT at an arbitrary frequency, normalized by
/// the window sum so a unit-amplitude sinusoid reads |X| = 1/2.
std::complex<double> windowed_dft(std::span<const double> x, double freq, double sample_rate);

/// Joint least-squares fit of sinusoids at the given frequencies plus a
/// constant term. Returns the mean power (amplitude^2 / 2) of each tone.
std::vector<double> tone_powers(std::span<const double> x, double sample_rate,
                                std::span<const double> freqs);

}  // namespace xtalk
