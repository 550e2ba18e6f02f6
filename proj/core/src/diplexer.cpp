#include "xtalk/diplexer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "xtalk/error.hpp"

namespace xtalk {

using std::numbers::pi;

std::complex<double> FirFilter::response(double freq) const {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t n = 0; n < taps.size(); ++n) {
    const double ph = -2.0 * pi * freq * static_cast<double>(n) / design_rate;
    acc += taps[n] * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return acc;
}

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(pi * x) / (pi * x);
}

// Hamming-windowed ideal response; taps mirrored so symmetry is exact.
std::vector<double> windowed(std::size_t order, double f_lo, double f_hi, double fs) {
  std::vector<double> h(order + 1);
  const double mid = 0.5 * static_cast<double>(order);
  for (std::size_t k = 0; k <= order / 2; ++k) {
    const double m = static_cast<double>(k) - mid;
    double ideal = 2.0 * f_hi / fs * sinc(2.0 * f_hi / fs * m);
    if (f_lo > 0.0) ideal -= 2.0 * f_lo / fs * sinc(2.0 * f_lo / fs * m);
    const double win = 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(k) / static_cast<double>(order));
    h[k] = h[order - k] = ideal * win;
  }
  return h;
}

}  // namespace

FirFilter design_fir_bandpass(std::size_t order, double f_lo, double f_hi, double sample_rate) {
  if (order < 2) throw InvalidArgument("design_fir_bandpass: order must be >= 2");
  if (!(sample_rate > 0.0)) throw InvalidArgument("design_fir_bandpass: sample rate must be positive");
  if (!(f_lo > 0.0 && f_lo < f_hi && f_hi < sample_rate / 2))
    throw InvalidArgument("design_fir_bandpass: need 0 < f_lo < f_hi < fs/2");
  FirFilter fir{windowed(order, f_lo, f_hi, sample_rate), order, f_lo, f_hi, sample_rate};
  const double gain = std::abs(fir.response(0.5 * (f_lo + f_hi)));
  if (!(gain > 0.0)) throw NumericError("design_fir_bandpass: zero gain at band center");
  for (double& t : fir.taps) t /= gain;
  return fir;
}

FirFilter design_fir_lowpass(std::size_t order, double cutoff, double sample_rate) {
  if (order < 2) throw InvalidArgument("design_fir_lowpass: order must be >= 2");
  if (!(sample_rate > 0.0)) throw InvalidArgument("design_fir_lowpass: sample rate must be positive");
  if (!(cutoff > 0.0 && cutoff < sample_rate / 2))
    throw InvalidArgument("design_fir_lowpass: need 0 < cutoff < fs/2");
  FirFilter fir{windowed(order, 0.0, cutoff, sample_rate), order, 0.0, cutoff, sample_rate};
  double dc = 0.0;
  for (double t : fir.taps) dc += t;
  for (double& t : fir.taps) t /= dc;
  return fir;
}

Filtered filter(std::span<const double> x, double sample_rate, const FirFilter& fir) {
  if (std::abs(sample_rate - fir.design_rate) > 1e-12 * fir.design_rate)
    throw InvalidArgument("filter: signal rate " + std::to_string(sample_rate) +
                          " Hz differs from design rate " + std::to_string(fir.design_rate) + " Hz");
  const std::size_t n = x.size();
  const std::size_t taps = fir.taps.size();
  Filtered out{std::vector<double>(n, 0.0), fir.group_delay()};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t kmax = std::min(taps - 1, i);
    double acc = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) acc += fir.taps[k] * x[i - k];
    out.samples[i] = acc;
  }
  return out;
}

DiplexResult diplex(std::span<const double> composite, double sample_rate, const DiplexConfig& cfg) {
  cfg.ica.validate();
  if (cfg.f_a == cfg.f_b) throw InvalidArgument("diplex: the two carrier frequencies must differ");
  if (!(cfg.band_fraction > 0.0 && cfg.band_fraction < 1.0))
    throw InvalidArgument("diplex: band_fraction must lie in (0, 1)");
  if (composite.size() < cfg.order + 2) throw InvalidArgument("diplex: composite shorter than the FIR");

  const double fr = cfg.band_fraction;
  auto fa = design_fir_bandpass(cfg.order, cfg.f_a * (1 - fr), cfg.f_a * (1 + fr), sample_rate);
  auto fb = design_fir_bandpass(cfg.order, cfg.f_b * (1 - fr), cfg.f_b * (1 + fr), sample_rate);
  const auto ya = filter(composite, sample_rate, fa).samples;
  const auto yb = filter(composite, sample_rate, fb).samples;

  const std::size_t skip = cfg.order;
  const std::size_t m = composite.size() - skip;
  Matrix branches(2, m);
  std::copy(ya.begin() + static_cast<std::ptrdiff_t>(skip), ya.end(), branches.row(0).begin());
  std::copy(yb.begin() + static_cast<std::ptrdiff_t>(skip), yb.end(), branches.row(1).begin());
  MultichannelSignal fir_only(std::move(branches), sample_rate);

  auto white = whiten(fir_only);
  auto sep = fit(white, cfg.ica);
  if (!sep.all_converged())
    throw NumericError("diplex: fastICA did not converge within " + std::to_string(cfg.ica.max_iter) +
                       " iterations");
  const double freqs[2] = {cfg.f_a, cfg.f_b};
  sep.assignment = identify_components(unmix(fir_only, sep, white.transform), freqs);
  Matrix y = unmix(fir_only, sep, white.transform).data();
  for (std::size_t c = 0; c < 2; ++c) {
    auto row = y.row(c);
    double peak = 0.0;
    for (double v : row) peak = std::max(peak, std::abs(v));
    for (double& v : row) v /= peak;
  }
  return DiplexResult{MultichannelSignal(std::move(y), sample_rate),
                      std::move(fir_only),
                      std::move(fa),
                      std::move(fb),
                      std::move(white.transform),
                      std::move(sep),
                      skip};
}

}  // namespace xtalk
