#include "xtalk/fastica.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "xtalk/error.hpp"
#include "xtalk/rng.hpp"
#include "xtalk/spectral.hpp"

namespace xtalk {

Contrast parse_contrast(std::string_view name) {
  if (name == "logcosh") return Contrast::LogCosh;
  if (name == "gauss") return Contrast::Gauss;
  throw InvalidArgument("unknown contrast '" + std::string(name) + "' (logcosh|gauss)");
}

std::string_view to_string(Contrast c) { return c == Contrast::LogCosh ? "logcosh" : "gauss"; }

Orthogonalization parse_orthogonalization(std::string_view name) {
  if (name == "deflation") return Orthogonalization::Deflation;
  if (name == "symmetric") return Orthogonalization::Symmetric;
  throw InvalidArgument("unknown orthogonalization '" + std::string(name) + "' (deflation|symmetric)");
}

std::string_view to_string(Orthogonalization o) {
  return o == Orthogonalization::Deflation ? "deflation" : "symmetric";
}

void FastIcaConfig::validate() const {
  if (!(a >= 1.0 && a <= 2.0)) throw InvalidArgument("fastica: a must lie in [1, 2]");
  if (!(tol > 0.0)) throw InvalidArgument("fastica: tol must be positive");
  if (max_iter < 1) throw InvalidArgument("fastica: max_iter must be >= 1");
}

namespace {

inline void contrast_point(double u, Contrast contrast, double a, double& g, double& dg) {
  if (contrast == Contrast::LogCosh) {
    const double t = std::tanh(a * u);
    g = t;
    dg = a * (1.0 - t * t);
  } else {
    const double e = std::exp(-0.5 * u * u);
    g = u * e;
    dg = (1.0 - u * u) * e;
  }
}

// log cosh without overflow for large |x|.
double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

}  // namespace

double contrast_G(double u, Contrast contrast, double a) {
  if (contrast == Contrast::LogCosh) return log_cosh(a * u) / a;
  return -std::exp(-0.5 * u * u);
}

ContrastValues contrast_eval(std::span<const double> u, Contrast contrast, double a) {
  ContrastValues out{std::vector<double>(u.size()), std::vector<double>(u.size())};
  for (std::size_t i = 0; i < u.size(); ++i) contrast_point(u[i], contrast, a, out.g[i], out.dg[i]);
  return out;
}

const QuadratureRule& gauss_hermite_32() {
  // Golub-Welsch: nodes are eigenvalues of the Hermite Jacobi matrix,
  // weights sqrt(pi) * (first eigenvector component)^2.
  static const QuadratureRule rule = [] {
    constexpr std::size_t n = 32;
    Matrix j(n, n);
    for (std::size_t k = 1; k < n; ++k) j(k - 1, k) = j(k, k - 1) = std::sqrt(0.5 * static_cast<double>(k));
    const auto e = eigendecompose(j);
    QuadratureRule r;
    for (std::size_t i = n; i-- > 0;) {
      r.nodes.push_back(e.values[i]);
      r.weights.push_back(std::sqrt(std::numbers::pi) * e.vectors(0, i) * e.vectors(0, i));
    }
    return r;
  }();
  return rule;
}

double gaussian_reference(Contrast contrast, double a) {
  if (contrast == Contrast::Gauss) return -1.0 / std::numbers::sqrt2;
  const auto& gh = gauss_hermite_32();
  double acc = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i)
    acc += gh.weights[i] * contrast_G(std::numbers::sqrt2 * gh.nodes[i], contrast, a);
  return acc / std::sqrt(std::numbers::pi);
}

double negentropy_estimate(std::span<const double> y, Contrast contrast, double a) {
  if (y.size() < 2) throw InvalidArgument("negentropy_estimate: need at least 2 samples");
  double mean = 0.0, sq = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  for (double v : y) sq += (v - mean) * (v - mean);
  const double var = sq / static_cast<double>(y.size());
  if (std::abs(mean) >= 1e-3 || std::abs(var - 1.0) >= 1e-3)
    throw InvalidArgument("negentropy_estimate: input is not standardized (mean " +
                          std::to_string(mean) + ", var " + std::to_string(var) + ")");
  double eg = 0.0;
  for (double v : y) eg += contrast_G(v, contrast, a);
  eg /= static_cast<double>(y.size());
  const double d = eg - gaussian_reference(contrast, a);
  return d * d;
}

namespace {

void normalize(std::vector<double>& w) {
  double n = 0.0;
  for (double v : w) n += v * v;
  n = std::sqrt(n);
  if (!(n > 0.0)) throw NumericError("fastica: weight vector collapsed to zero");
  for (double& v : w) v /= n;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// One application of the fixed-point update (before normalization).
std::vector<double> update(const Matrix& b, std::span<const double> w, const FastIcaConfig& cfg) {
  const std::size_t c = b.rows();
  const std::size_t n = b.cols();
  std::vector<double> acc(c, 0.0);
  double dg_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double y = 0.0;
    for (std::size_t i = 0; i < c; ++i) y += w[i] * b(i, k);
    double g, dg;
    contrast_point(y, cfg.contrast, cfg.a, g, dg);
    for (std::size_t i = 0; i < c; ++i) acc[i] += b(i, k) * g;
    dg_sum += dg;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < c; ++i) acc[i] = acc[i] * inv_n - dg_sum * inv_n * w[i];
  return acc;
}

void project_out(std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
  for (const auto& u : basis) {
    const double p = dot(w, u);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= p * u[i];
  }
}

UnitFit run_unit(const Matrix& b, std::vector<double> w, const FastIcaConfig& cfg,
                 const std::vector<std::vector<double>>& basis) {
  project_out(w, basis);
  normalize(w);
  UnitFit fit;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    auto next = update(b, w, cfg);
    project_out(next, basis);
    normalize(next);
    const double residual = 1.0 - std::abs(dot(next, w));
    w = std::move(next);
    fit.iterations = it;
    if (residual <= cfg.tol) {
      fit.converged = true;
      break;
    }
  }
  fit.w = std::move(w);
  return fit;
}

std::vector<double> random_unit(std::size_t c, GaussianSource& rng) {
  std::vector<double> w(c);
  for (double& v : w) v = rng.next();
  normalize(w);
  return w;
}

void check_whitened_dims(const MultichannelSignal& b) {
  if (b.channels() < 1) throw InvalidArgument("fastica: empty input");
}

}  // namespace

Matrix symmetric_orthogonalize(const Matrix& w) {
  const std::size_t c = w.rows();
  const Matrix eye = Matrix::identity(c);
  const double scale = frobenius_norm(w);
  if (!(scale > 0.0)) throw NumericError("symmetric_orthogonalize: zero matrix");
  Matrix cur = (1.0 / scale) * w;
  for (int it = 0; it < 2000; ++it) {
    const Matrix wwt = cur * cur.transposed();
    if (frobenius_norm(wwt - eye) < 1e-10) return cur;
    cur = 1.5 * cur - 0.5 * (wwt * cur);
  }
  throw NumericError("symmetric_orthogonalize: did not converge (matrix near singular)");
}

UnitFit fit_one_unit(const MultichannelSignal& whitened, std::span<const double> w0,
                     const FastIcaConfig& cfg) {
  cfg.validate();
  check_whitened_dims(whitened);
  if (w0.size() != whitened.channels()) throw InvalidArgument("fit_one_unit: w0 dimension mismatch");
  if (std::abs(std::sqrt(dot(w0, w0)) - 1.0) > 1e-9) throw InvalidArgument("fit_one_unit: w0 must be unit norm");
  return run_unit(whitened.data(), std::vector<double>(w0.begin(), w0.end()), cfg, {});
}

Assignment Assignment::identity(std::size_t n) {
  Assignment a;
  for (std::size_t i = 0; i < n; ++i) {
    a.order.push_back(i);
    a.sign.push_back(1);
  }
  return a;
}

bool SeparationResult::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool v) { return v; });
}

SeparationResult fit(const MultichannelSignal& whitened, const FastIcaConfig& cfg) {
  cfg.validate();
  check_whitened_dims(whitened);
  const Matrix& b = whitened.data();
  const std::size_t c = b.rows();
  GaussianSource rng(cfg.seed);
  SeparationResult res;
  res.w = Matrix(c, c);
  res.assignment = Assignment::identity(c);

  if (cfg.ortho == Orthogonalization::Deflation) {
    std::vector<std::vector<double>> basis;
    for (std::size_t p = 0; p < c; ++p) {
      auto unit = run_unit(b, random_unit(c, rng), cfg, basis);
      std::copy(unit.w.begin(), unit.w.end(), res.w.row(p).begin());
      res.iterations.push_back(unit.iterations);
      res.converged.push_back(unit.converged);
      basis.push_back(std::move(unit.w));
    }
  } else {
    Matrix w(c, c);
    for (double& v : w.values()) v = rng.next();
    w = symmetric_orthogonalize(w);
    int sweeps = 0;
    bool done = false;
    for (int it = 1; it <= cfg.max_iter && !done; ++it) {
      Matrix next(c, c);
      for (std::size_t i = 0; i < c; ++i) {
        const auto row = update(b, w.row(i), cfg);
        std::copy(row.begin(), row.end(), next.row(i).begin());
      }
      next = symmetric_orthogonalize(next);
      double worst = 0.0;
      for (std::size_t i = 0; i < c; ++i) worst = std::max(worst, 1.0 - std::abs(dot(next.row(i), w.row(i))));
      w = std::move(next);
      sweeps = it;
      done = worst <= cfg.tol;
    }
    res.w = std::move(w);
    res.iterations.assign(c, sweeps);
    res.converged.assign(c, done);
  }
  res.w_full = res.w;
  return res;
}

SeparationResult fit(const Whitened& whitened, const FastIcaConfig& cfg) {
  auto res = fit(whitened.signal, cfg);
  res.w_full = res.w * whitened.transform.whitener;
  return res;
}

MultichannelSignal unmix(const MultichannelSignal& s, const SeparationResult& result,
                         const WhiteningTransform& transform) {
  const std::size_t c = s.channels();
  if (result.w_full.rows() != c || result.w_full.cols() != c || transform.mean.size() != c ||
      result.assignment.order.size() != c)
    throw InvalidArgument("unmix: dimension mismatch between signal and separation result");
  Matrix r = s.data();
  for (std::size_t i = 0; i < c; ++i)
    for (double& v : r.row(i)) v -= transform.mean[i];
  Matrix p(c, c);
  for (std::size_t k = 0; k < c; ++k) p(k, result.assignment.order[k]) = result.assignment.sign[k];
  return {(p * result.w_full) * r, s.sample_rate()};
}

Assignment identify_components(const MultichannelSignal& y, std::span<const double> expected_freqs) {
  const std::size_t c = y.channels();
  if (expected_freqs.size() != c)
    throw InvalidArgument("identify_components: need one expected frequency per component");
  for (std::size_t i = 0; i < c; ++i) {
    if (!(expected_freqs[i] > 0.0) || expected_freqs[i] >= y.sample_rate() / 2)
      throw InvalidArgument("identify_components: expected frequency outside (0, Nyquist)");
    for (std::size_t j = 0; j < i; ++j)
      if (expected_freqs[i] == expected_freqs[j])
        throw InvalidArgument("identify_components: expected frequencies must be distinct");
  }
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  Assignment a{std::vector<std::size_t>(c, kUnset), std::vector<int>(c, 1)};
  for (std::size_t comp = 0; comp < c; ++comp) {
    std::size_t best = 0;
    double best_mag = -1.0;
    std::complex<double> best_x;
    for (std::size_t label = 0; label < c; ++label) {
      const auto x = windowed_dft(y.channel(comp), expected_freqs[label], y.sample_rate());
      if (std::abs(x) > best_mag) {
        best_mag = std::abs(x);
        best = label;
        best_x = x;
      }
    }
    if (a.order[best] != kUnset)
      throw IdentificationError("identify_components: components " + std::to_string(a.order[best]) +
                                " and " + std::to_string(comp) + " both resolve to " +
                                std::to_string(expected_freqs[best]) + " Hz");
    a.order[best] = comp;
    // sin(wt + phi) reads arg X = phi - pi/2; keep phi in (-pi/2, pi/2].
    const double phi = std::arg(best_x) + std::numbers::pi / 2;
    a.sign[best] = std::cos(phi) < 0.0 ? -1 : 1;
  }
  return a;
}

}  // namespace xtalk
