#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "xtalk/fastica.hpp"
#include "xtalk/preprocess.hpp"
#include "xtalk/signal.hpp"

namespace xtalk {

/// Linear-phase FIR of order p (p + 1 taps). Lowpass designs use f_lo = 0.
struct FirFilter {
  std::vector<double> taps;
  std::size_t order = 0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double design_rate = 0.0;

  double group_delay() const { return 0.5 * static_cast<double>(order); }
  /// H(f) = sum_n taps[n] exp(-j 2 pi f n / fs)
  std::complex<double> response(double freq) const;
};

/// Windowed-sinc bandpass, Hamming window w[n] = 0.54 - 0.46 cos(2 pi n / p),
/// gain normalized to 1 at the band center.
FirFilter design_fir_bandpass(std::size_t order, double f_lo, double f_hi, double sample_rate);

/// Windowed-sinc lowpass, same window, unit DC gain.
FirFilter design_fir_lowpass(std::size_t order, double cutoff, double sample_rate);

struct Filtered {
  std::vector<double> samples;  // same length as input, causal, zero initial state
  double group_delay = 0.0;     // samples
};

/// Direct-form convolution y[n] = sum_k taps[k] x[n-k].
Filtered filter(std::span<const double> x, double sample_rate, const FirFilter& fir);

struct DiplexConfig {
  double f_a = 25.0e6;
  double f_b = 40.0e6;
  std::size_t order = 5;
  double band_fraction = 0.2;  // band edges at f (1 -+ fraction)
  FastIcaConfig ica;
};

struct DiplexResult {
  MultichannelSignal output;    // ch0 carries f_a, ch1 carries f_b; zero mean, peak 1
  MultichannelSignal fir_only;  // the two bandpass outputs that fed ICA
  FirFilter filter_a;
  FirFilter filter_b;
  WhiteningTransform transform;
  SeparationResult separation;
  std::size_t dropped = 0;  // leading transient samples removed (= order)
};

/// Splits a single-detector composite into its two carriers: two bandpass
/// FIRs, drop the FIR transient, then whiten + fastICA + identification
/// by expected frequency, then peak normalization. A single-tone input
/// surfaces as RankDeficientError from whitening; a non-converged ICA as
/// NumericError.
DiplexResult diplex(std::span<const double> composite, double sample_rate, const DiplexConfig& cfg);

}  // namespace xtalk
