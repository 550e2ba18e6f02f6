#include "xtalk/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "xtalk/error.hpp"

namespace xtalk {

namespace {

double mean_of(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

double rms_of(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace

Centered center(const MultichannelSignal& s) {
  Matrix data = s.data();
  std::vector<double> mean(data.rows(), 0.0);
  for (std::size_t c = 0; c < data.rows(); ++c) {
    auto row = data.row(c);
    // Second pass removes the rounding left by the first.
    for (int pass = 0; pass < 2; ++pass) {
      const double m = mean_of(row);
      for (double& v : row) v -= m;
      mean[c] += m;
    }
  }
  return {MultichannelSignal(std::move(data), s.sample_rate()), std::move(mean)};
}

Matrix covariance(const MultichannelSignal& r) {
  const std::size_t c = r.channels();
  const std::size_t n = r.length();
  for (std::size_t i = 0; i < c; ++i) {
    const auto row = r.channel(i);
    const double m = mean_of(row);
    if (std::abs(m) > 1e-9 * rms_of(row))
      throw InvalidArgument("covariance: channel " + std::to_string(i) + " is not centered (mean " +
                            std::to_string(m) + ")");
  }
  Matrix sigma(c, c);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i; j < c; ++j) {
      const auto a = r.channel(i);
      const auto b = r.channel(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
      sigma(i, j) = sigma(j, i) = acc / static_cast<double>(n);
    }
  }
  return sigma;
}

namespace {

EigenDecomposition eigen2(const Matrix& s) {
  const double a = s(0, 0), b = 0.5 * (s(0, 1) + s(1, 0)), c = s(1, 1);
  const double theta = 0.5 * std::atan2(2.0 * b, a - c);
  const double cs = std::cos(theta), sn = std::sin(theta);
  const double l1 = a * cs * cs + 2.0 * b * sn * cs + c * sn * sn;
  const double l2 = a * sn * sn - 2.0 * b * sn * cs + c * cs * cs;
  EigenDecomposition e{Matrix{{cs, -sn}, {sn, cs}}, {l1, l2}};
  if (l2 > l1) {
    e.values = {l2, l1};
    e.vectors = Matrix{{-sn, cs}, {cs, sn}};
  }
  return e;
}

EigenDecomposition eigen_jacobi(const Matrix& s) {
  const std::size_t n = s.rows();
  Matrix a = s;
  Matrix v = Matrix::identity(n);
  const double scale = frobenius_norm(s);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) < 1e-12 * scale || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  EigenDecomposition e{Matrix(n, n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    e.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) e.vectors(k, j) = v(k, order[j]);
  }
  return e;
}

}  // namespace

EigenDecomposition eigendecompose(const Matrix& sigma) {
  if (!sigma.is_square() || sigma.empty()) throw InvalidArgument("eigendecompose: square matrix required");
  double maxabs = 0.0;
  for (double v : sigma.values()) maxabs = std::max(maxabs, std::abs(v));
  const std::size_t n = sigma.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-10 * std::max(maxabs, 1e-300))
        throw InvalidArgument("eigendecompose: matrix is not symmetric");
  if (n == 1) return {Matrix{{1.0}}, {sigma(0, 0)}};
  if (n == 2) return eigen2(sigma);
  return eigen_jacobi(sigma);
}

double condition_number(const Matrix& m) {
  const auto e = eigendecompose(m.transposed() * m);
  if (e.values.back() <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(e.values.front() / e.values.back());
}

MultichannelSignal WhiteningTransform::apply(const MultichannelSignal& s) const {
  if (s.channels() != mean.size()) throw InvalidArgument("whitening: channel count mismatch");
  Matrix r = s.data();
  for (std::size_t c = 0; c < r.rows(); ++c)
    for (double& v : r.row(c)) v -= mean[c];
  return {whitener * r, s.sample_rate()};
}

MultichannelSignal WhiteningTransform::invert(const MultichannelSignal& b) const {
  if (b.channels() != mean.size()) throw InvalidArgument("dewhitening: channel count mismatch");
  Matrix x = dewhitener * b.data();
  for (std::size_t c = 0; c < x.rows(); ++c)
    for (double& v : x.row(c)) v += mean[c];
  return {std::move(x), b.sample_rate()};
}

Whitened whiten(const MultichannelSignal& s) {
  auto centered = center(s);
  const Matrix sigma = covariance(centered.signal);
  auto eig = eigendecompose(sigma);
  const std::size_t c = sigma.rows();
  const double top = eig.values.front();
  for (std::size_t i = 0; i < c; ++i) {
    if (!(eig.values[i] > kDegeneracy * top) || !(top > 0.0))
      throw RankDeficientError("whiten: covariance is rank-deficient (eigenvalue " +
                               std::to_string(eig.values[i]) + " vs max " + std::to_string(top) +
                               "); channels are linearly dependent");
  }
  WhiteningTransform t;
  t.mean = std::move(centered.mean);
  t.eigvecs = eig.vectors;
  t.eigvals = eig.values;
  t.whitener = Matrix(c, c);
  t.dewhitener = Matrix(c, c);
  for (std::size_t i = 0; i < c; ++i) {
    const double sq = std::sqrt(eig.values[i]);
    for (std::size_t j = 0; j < c; ++j) {
      t.whitener(i, j) = eig.vectors(j, i) / sq;
      t.dewhitener(j, i) = eig.vectors(j, i) * sq;
    }
  }
  MultichannelSignal b(t.whitener * centered.signal.data(), s.sample_rate());
  return {std::move(b), std::move(t)};
}

MultichannelSignal dewhiten(const MultichannelSignal& b, const WhiteningTransform& t) {
  return t.invert(b);
}

}  // namespace xtalk
