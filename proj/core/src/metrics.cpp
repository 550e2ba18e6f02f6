#include "xtalk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "xtalk/diplexer.hpp"
#include "xtalk/error.hpp"
#include "xtalk/kv.hpp"
#include "xtalk/spectral.hpp"

namespace xtalk {

Decibels Decibels::from_ratio(double ratio) {
  if (ratio == 0.0) return neg_inf();
  if (std::isinf(ratio)) return pos_inf();
  return finite(10.0 * std::log10(ratio));
}

double Decibels::as_double() const {
  switch (kind) {
    case Kind::NegInf: return -std::numeric_limits<double>::infinity();
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    default: return value;
  }
}

std::string Decibels::to_string() const {
  switch (kind) {
    case Kind::NegInf: return "neg_sentinel";
    case Kind::PosInf: return "pos_sentinel";
    default: return format_double(value);
  }
}

Decibels Decibels::parse(const std::string& text) {
  if (text == "neg_sentinel") return neg_inf();
  if (text == "pos_sentinel") return pos_inf();
  const double v = parse_double(text);
  if (!std::isfinite(v)) throw InvalidArgument("decibels: non-finite value '" + text + "'");
  return finite(v);
}

namespace {

double power(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

}  // namespace

Decibels isr(std::span<const double> estimated, std::span<const double> truth) {
  if (estimated.size() != truth.size() || truth.empty()) throw InvalidArgument("isr: length mismatch");
  double et = 0.0, tt = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    et += estimated[k] * truth[k];
    tt += truth[k] * truth[k];
  }
  if (tt == 0.0) throw InvalidArgument("isr: truth has zero power");
  const double c = et / tt;
  double pr = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double r = estimated[k] - c * truth[k];
    pr += r * r;
  }
  const double ps = c * c * tt;
  if (ps == 0.0) return Decibels::pos_inf();
  // Residual at round-off level of the fitted signal counts as exact.
  if (pr <= 1e-28 * ps) return Decibels::neg_inf();
  return Decibels::from_ratio(pr / ps);
}

Decibels snr(std::span<const double> signal, std::span<const double> noise_reference) {
  if (signal.size() != noise_reference.size() || signal.empty()) throw InvalidArgument("snr: length mismatch");
  const double pn = power(noise_reference);
  if (pn == 0.0) return Decibels::pos_inf();
  return Decibels::from_ratio(power(signal) / pn);
}

namespace {

// Distance from the origin to the segment [a, b] in the complex plane.
double segment_min(std::complex<double> a, std::complex<double> b) {
  const std::complex<double> d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(a);
  const double t = std::clamp(-(a.real() * d.real() + a.imag() * d.imag()) / len2, 0.0, 1.0);
  return std::abs(a + t * d);
}

}  // namespace

double envelope_depth(std::span<const double> x, double sample_rate, const DemodSettings& s) {
  if (!(s.carrier > 0.0 && s.carrier < sample_rate / 2))
    throw InvalidArgument("envelope_depth: carrier must lie in (0, Nyquist)");
  const std::size_t order = s.lowpass_order ? s.lowpass_order : default_lowpass_order(s.lowpass_cutoff, sample_rate);
  const auto lp = design_fir_lowpass(order, s.lowpass_cutoff, sample_rate);
  const std::size_t n = x.size();
  std::vector<double> mi(n), mq(n);
  const double w = 2.0 * std::numbers::pi * s.carrier / sample_rate;
  for (std::size_t k = 0; k < n; ++k) {
    mi[k] = x[k] * std::sin(w * static_cast<double>(k));
    mq[k] = x[k] * std::cos(w * static_cast<double>(k));
  }
  const auto fi = filter(mi, sample_rate, lp).samples;
  const auto fq = filter(mq, sample_rate, lp).samples;
  // Causal output is settled from index `order` on; drop the same at the end.
  const std::size_t lo = order, hi = n > order ? n - order : 0;
  if (hi <= lo + 1) throw InvalidArgument("envelope_depth: record shorter than the filter settling");
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (std::size_t k = lo; k < hi; ++k) {
    const std::complex<double> z(fi[k], fq[k]);
    mx = std::max(mx, std::abs(z));
    if (k + 1 < hi) mn = std::min(mn, segment_min(z, {fi[k + 1], fq[k + 1]}));
  }
  if (!(mx > 0.0)) throw NumericError("envelope_depth: envelope is identically zero");
  return std::clamp((mx - mn) / (mx + mn), 0.0, 1.0);
}

double envelope_depth(std::span<const double> channel, double sample_rate, double carrier,
                      double other_carrier) {
  auto s = default_demod_settings(carrier, other_carrier, sample_rate);
  return envelope_depth(channel, sample_rate, s);
}

Matrix gain_matrix(const Matrix& w_full, const Matrix& mixing, std::span<const double> source_std) {
  if (mixing.cols() != source_std.size()) throw InvalidArgument("gain_matrix: source count mismatch");
  return (w_full * mixing) * Matrix::diagonal(source_std);
}

bool is_signed_permutation(const Matrix& g, double hi, double lo) {
  if (!g.is_square()) return false;
  std::vector<int> col_hits(g.cols(), 0);
  for (std::size_t r = 0; r < g.rows(); ++r) {
    int big = 0;
    for (std::size_t c = 0; c < g.cols(); ++c) {
      const double v = std::abs(g(r, c));
      if (v > hi) {
        ++big;
        ++col_hits[c];
      } else if (v >= lo) {
        return false;
      }
    }
    if (big != 1) return false;
  }
  return std::all_of(col_hits.begin(), col_hits.end(), [](int h) { return h == 1; });
}

Decibels cross_tone_residual(std::span<const double> x, double sample_rate, double f_own, double f_other) {
  const double freqs[2] = {f_own, f_other};
  const auto p = tone_powers(x, sample_rate, freqs);
  if (p[0] == 0.0) return Decibels::pos_inf();
  return Decibels::from_ratio(p[1] / p[0]);
}

}  // namespace xtalk
