#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "xtalk/matrix.hpp"
#include "xtalk/preprocess.hpp"
#include "xtalk/signal.hpp"

namespace xtalk {

/// Non-quadratic contrast used in the negentropy approximation
/// J(y) ~ [E G(y) - E G(nu)]^2, nu standard normal.
///   LogCosh: G(u) = (1/a) log cosh(a u),  g = tanh(a u),  g' = a (1 - tanh^2(a u))
///   Gauss:   G(u) = -exp(-u^2/2),         g = u exp(-u^2/2), g' = (1 - u^2) exp(-u^2/2)
enum class Contrast { LogCosh, Gauss };

enum class Orthogonalization { Deflation, Symmetric };

Contrast parse_contrast(std::string_view name);
std::string_view to_string(Contrast c);
Orthogonalization parse_orthogonalization(std::string_view name);
std::string_view to_string(Orthogonalization o);

struct FastIcaConfig {
  Contrast contrast = Contrast::LogCosh;
  double a = 1.0;  // log-cosh steepness, 1 <= a <= 2
  int max_iter = 200;
  double tol = 1e-8;  // on 1 - |<w+, w>|
  std::uint64_t seed = 1;
  Orthogonalization ortho = Orthogonalization::Symmetric;

  void validate() const;
};

struct ContrastValues {
  std::vector<double> g;
  std::vector<double> dg;
};

double contrast_G(double u, Contrast contrast, double a);
ContrastValues contrast_eval(std::span<const double> u, Contrast contrast, double a);

/// E G(nu) for standard normal nu: -1/sqrt(2) for Gauss, 32-node
/// Gauss-Hermite quadrature for LogCosh.
double gaussian_reference(Contrast contrast, double a);

/// Nodes/weights for the physicists' Hermite weight exp(-x^2).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_hermite_32();

/// k = 1 single-contrast negentropy estimate. Requires |mean| < 1e-3 and
/// |var - 1| < 1e-3.
double negentropy_estimate(std::span<const double> y, Contrast contrast, double a);

struct UnitFit {
  std::vector<double> w;
  int iterations = 0;
  bool converged = false;
};

/// One-unit fixed point on whitened data:
///   w+ = E{B g(w^T B)} - E{g'(w^T B)} w,   w = w+ / ||w+||
/// until 1 - |<w_k, w_{k-1}>| <= tol. Non-convergence is reported, not thrown.
UnitFit fit_one_unit(const MultichannelSignal& whitened, std::span<const double> w0,
                     const FastIcaConfig& cfg);

/// Output k of the separator is sign[k] * component[order[k]].
struct Assignment {
  std::vector<std::size_t> order;
  std::vector<int> sign;

  static Assignment identity(std::size_t n);
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct SeparationResult {
  Matrix w;       // acts on whitened data, orthonormal rows
  Matrix w_full;  // w * whitener, acts on centered raw data
  std::vector<int> iterations;
  std::vector<bool> converged;
  Assignment assignment;

  bool all_converged() const;
};

/// Estimates all C units. Deflation runs units in order with Gram-Schmidt
/// projection after every update; Symmetric updates all rows jointly and
/// re-orthonormalizes each sweep. w_full equals w here (identity whitener).
SeparationResult fit(const MultichannelSignal& whitened, const FastIcaConfig& cfg);
/// Same, composing w_full with the recorded whitener.
SeparationResult fit(const Whitened& whitened, const FastIcaConfig& cfg);

/// Y = P W whitener (S - mean), P from result.assignment.
MultichannelSignal unmix(const MultichannelSignal& s, const SeparationResult& result,
                         const WhiteningTransform& transform);

/// Resolves permutation and sign: each component is attributed to the
/// expected frequency where its Hann-windowed spectrum is strongest, and
/// its sign is chosen so the carrier phase at that frequency lies in
/// (-pi/2, pi/2] against a sine reference. Throws IdentificationError
/// when two components resolve to the same label.
Assignment identify_components(const MultichannelSignal& y, std::span<const double> expected_freqs);

/// W <- (3/2) W - (1/2) W W^T W from W / ||W||_F until ||W W^T - I||_F < 1e-10.
Matrix symmetric_orthogonalize(const Matrix& w);

}  // namespace xtalk
