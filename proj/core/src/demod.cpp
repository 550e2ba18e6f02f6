#include "xtalk/demod.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xtalk/diplexer.hpp"

namespace xtalk {

using std::numbers::pi;

namespace {

std::string describe(const std::vector<SampleRange>& ranges, double rate) {
  std::ostringstream os;
  os << "phase tracking lost in " << ranges.size() << " range(s):";
  const std::size_t shown = std::min<std::size_t>(ranges.size(), 5);
  for (std::size_t i = 0; i < shown; ++i)
    os << " [" << ranges[i].first << ".." << ranges[i].last << "] (t=" << ranges[i].first / rate
       << " s)";
  if (shown < ranges.size()) os << " ...";
  return os.str();
}

}  // namespace

PhaseTrackingLost::PhaseTrackingLost(std::vector<SampleRange> ranges, double sample_rate)
    : NumericError(describe(ranges, sample_rate)), ranges_(std::move(ranges)) {}

std::size_t default_lowpass_order(double cutoff, double sample_rate) {
  auto p = static_cast<std::size_t>(std::ceil(6.6 * sample_rate / cutoff));
  return p + (p % 2);
}

DemodSettings default_demod_settings(double carrier, double other_carrier, double sample_rate) {
  DemodSettings s;
  s.carrier = carrier;
  s.lowpass_cutoff = 1.5 * std::abs(other_carrier - carrier);
  s.decimation = std::max<std::size_t>(1, static_cast<std::size_t>(sample_rate / (6.0 * s.lowpass_cutoff)));
  s.lowpass_order = default_lowpass_order(s.lowpass_cutoff, sample_rate);
  return s;
}

std::vector<double> unwrap(std::span<const double> wrapped) {
  std::vector<double> out(wrapped.begin(), wrapped.end());
  double offset = 0.0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    double d = wrapped[k] - wrapped[k - 1];
    // Map the raw step into (-pi, pi] and carry the correction forward.
    const double step = d - 2.0 * pi * std::ceil((d - pi) / (2.0 * pi));
    offset += step - d;
    out[k] = wrapped[k] + offset;
  }
  return out;
}

DemodOutput demodulate_detailed(std::span<const double> x, double sample_rate, const DemodSettings& s) {
  if (!(s.carrier > 0.0 && s.carrier < sample_rate / 2))
    throw InvalidArgument("demodulate: carrier must lie in (0, Nyquist)");
  if (!(s.lowpass_cutoff > 0.0 && s.lowpass_cutoff < s.carrier))
    throw InvalidArgument("demodulate: lowpass cutoff must lie in (0, carrier)");
  if (s.decimation < 1) throw InvalidArgument("demodulate: decimation must be >= 1");
  if (!(s.envelope_floor >= 0.0 && s.envelope_floor < 1.0))
    throw InvalidArgument("demodulate: envelope floor must lie in [0, 1)");
  const std::size_t order = s.lowpass_order ? s.lowpass_order : default_lowpass_order(s.lowpass_cutoff, sample_rate);
  if (order % 2) throw InvalidArgument("demodulate: lowpass order must be even (integer group delay)");
  // The Hamming lowpass cascaded with itself: one pass leaves the 2x carrier
  // image near -80 dB, which is a 1e-4 rad phase ripple; two passes bury it.
  const auto single = design_fir_lowpass(order, s.lowpass_cutoff, sample_rate);
  FirFilter lp = single;
  lp.order = 2 * order;
  lp.taps.assign(lp.order + 1, 0.0);
  for (std::size_t i = 0; i <= order; ++i)
    for (std::size_t j = 0; j <= order; ++j) lp.taps[i + j] += single.taps[i] * single.taps[j];

  const std::size_t n = x.size();
  const std::size_t delay = order;
  // Pad by the group delay so the causal filter output lines up with x.
  std::vector<double> mi(n + delay, 0.0), mq(n + delay, 0.0);
  const double w = 2.0 * pi * s.carrier / sample_rate;
  for (std::size_t k = 0; k < n; ++k) {
    const double ph = w * static_cast<double>(k);
    mi[k] = x[k] * std::sin(ph);
    mq[k] = x[k] * std::cos(ph);
  }
  const auto fi = filter(mi, sample_rate, lp).samples;
  const auto fq = filter(mq, sample_rate, lp).samples;

  // Full-rate envelope for null detection.
  std::vector<double> env_full(n);
  for (std::size_t k = 0; k < n; ++k) env_full[k] = 2.0 * std::hypot(fi[k + delay], fq[k + delay]);

  const std::size_t d = s.decimation;
  const std::size_t nd = (n + d - 1) / d;
  const std::size_t settle = lp.order;  // decimated samples flagged at each end
  DemodOutput out;
  out.phase.sample_rate = sample_rate / static_cast<double>(d);
  out.phase.carrier_freq = s.carrier;
  out.phase.settle = std::min(settle, nd / 2);
  std::vector<double> wrapped(nd);
  out.envelope.resize(nd);
  for (std::size_t j = 0; j < nd; ++j) {
    const std::size_t k = j * d;
    wrapped[j] = std::atan2(fq[k + delay], fi[k + delay]);
    out.envelope[j] = env_full[k];
  }
  out.phase.samples = unwrap(wrapped);

  // Settled region in full-rate indices.
  const std::size_t lo = out.phase.settle * d;
  const std::size_t hi_dec = nd - out.phase.settle;  // exclusive, decimated
  const std::size_t hi = std::min(n, hi_dec * d);
  if (lo >= hi) return out;
  std::vector<double> settled(env_full.begin() + static_cast<std::ptrdiff_t>(lo),
                              env_full.begin() + static_cast<std::ptrdiff_t>(hi));
  auto mid = settled.begin() + static_cast<std::ptrdiff_t>(settled.size() / 2);
  std::nth_element(settled.begin(), mid, settled.end());
  out.envelope_median = *mid;
  const double floor = s.envelope_floor * out.envelope_median;
  bool in_run = false;
  for (std::size_t k = lo; k < hi; ++k) {
    const bool low = env_full[k] < floor || out.envelope_median == 0.0;
    if (!low) {
      in_run = false;
      continue;
    }
    const std::size_t j = k / d;
    if (in_run) {
      out.lost.back().last = j;
    } else if (!out.lost.empty() && j <= out.lost.back().last + 1) {
      // Runs closer than one decimated sample collapse together.
      out.lost.back().last = j;
      in_run = true;
    } else {
      out.lost.push_back({j, j});
      in_run = true;
    }
  }
  return out;
}

PhaseSeries demodulate(std::span<const double> x, double sample_rate, const DemodSettings& s) {
  auto out = demodulate_detailed(x, sample_rate, s);
  if (!out.lost.empty()) throw PhaseTrackingLost(out.lost, out.phase.sample_rate);
  return std::move(out.phase);
}

PhaseSeries demodulate(std::span<const double> x, double sample_rate, double carrier,
                       double lowpass_cutoff, std::size_t decimation) {
  DemodSettings s;
  s.carrier = carrier;
  s.lowpass_cutoff = lowpass_cutoff;
  s.decimation = decimation;
  return demodulate(x, sample_rate, s);
}

DensitySeries line_integrated_density(const PhaseSeries& phi1, const PhaseSeries& phi2,
                                      const InterferometerParams& params) {
  if (phi1.samples.size() != phi2.samples.size())
    throw InvalidArgument("line_integrated_density: phase series differ in length");
  if (phi1.sample_rate != phi2.sample_rate)
    throw InvalidArgument("line_integrated_density: phase series differ in sample rate");
  if (params.lambda1 == params.lambda2)
    throw InvalidArgument("line_integrated_density: lambda1 == lambda2");
  if (!(params.r_e > 0.0)) throw InvalidArgument("line_integrated_density: r_e must be positive");
  const double l1 = params.lambda1, l2 = params.lambda2;
  const double denom = params.r_e * (l1 * l1 - l2 * l2);
  DensitySeries out{std::vector<double>(phi1.samples.size()), phi1.sample_rate,
                    std::max(phi1.settle, phi2.settle)};
  for (std::size_t k = 0; k < out.samples.size(); ++k)
    out.samples[k] = (phi1.samples[k] * l1 - phi2.samples[k] * l2) / denom;
  return out;
}

}  // namespace xtalk
