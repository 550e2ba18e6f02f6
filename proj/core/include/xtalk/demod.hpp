#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xtalk/error.hpp"
#include "xtalk/signalgen.hpp"

namespace xtalk {

struct PhaseSeries {
  std::vector<double> samples;  // unwrapped phase, radians
  double sample_rate = 0.0;     // after decimation
  double carrier_freq = 0.0;
  std::size_t settle = 0;       // samples at each end inside the filter transient
};

struct DensitySeries {
  std::vector<double> samples;  // line-integrated electron density, m^-2
  double sample_rate = 0.0;
  std::size_t settle = 0;
};

/// Inclusive range of decimated sample indices.
struct SampleRange {
  std::size_t first = 0;
  std::size_t last = 0;
  friend bool operator==(const SampleRange&, const SampleRange&) = default;
};

/// Raised when the IQ envelope falls below the floor: the phase meter
/// cannot follow the carrier through an envelope null.
class PhaseTrackingLost : public NumericError {
 public:
  PhaseTrackingLost(std::vector<SampleRange> ranges, double sample_rate);
  const std::vector<SampleRange>& ranges() const noexcept { return ranges_; }

 private:
  std::vector<SampleRange> ranges_;
};

struct DemodSettings {
  double carrier = 0.0;
  double lowpass_cutoff = 0.0;
  std::size_t decimation = 1;
  std::size_t lowpass_order = 0;  // 0: smallest even p >= 6.6 fs / cutoff
  double envelope_floor = 0.2;    // fraction of the median settled envelope
};

/// Defaults for a channel whose neighbour carrier sits at `other_carrier`:
/// cutoff 1.5 x spacing (wide enough that a leaking neighbour beats
/// through, as on a real IF phase meter), decimation floor(fs / (6 cutoff)).
DemodSettings default_demod_settings(double carrier, double other_carrier, double sample_rate);

std::size_t default_lowpass_order(double cutoff, double sample_rate);

struct DemodOutput {
  PhaseSeries phase;
  std::vector<double> envelope;  // carrier amplitude, decimated
  std::vector<SampleRange> lost; // envelope below floor (decimated indices)
  double envelope_median = 0.0;
};

/// IQ demodulation against a sine reference: I = LP(x sin wt),
/// Q = LP(x cos wt), phase = unwrap(atan2(Q, I)), so sin(wt + phi) reads phi.
/// The lowpass is the Hamming design of `lowpass_order` applied twice,
/// delay-compensated. Never throws on tracking loss; the
/// lost ranges are returned.
DemodOutput demodulate_detailed(std::span<const double> x, double sample_rate, const DemodSettings& s);

/// As demodulate_detailed, throwing PhaseTrackingLost if any range is lost.
PhaseSeries demodulate(std::span<const double> x, double sample_rate, double carrier,
                       double lowpass_cutoff, std::size_t decimation);
PhaseSeries demodulate(std::span<const double> x, double sample_rate, const DemodSettings& s);

/// out[0] = in[0]; out[k] - out[k-1] in (-pi, pi].
std::vector<double> unwrap(std::span<const double> wrapped);

/// (dphi1 lambda1 - dphi2 lambda2) / (r_e (lambda1^2 - lambda2^2)), sample-wise.
DensitySeries line_integrated_density(const PhaseSeries& phi1, const PhaseSeries& phi2,
                                      const InterferometerParams& params);

}  // namespace xtalk
