#pragma once

#include <vector>

#include "xtalk/matrix.hpp"
#include "xtalk/signal.hpp"

namespace xtalk {

struct Centered {
  MultichannelSignal signal;
  std::vector<double> mean;  // per-channel offset that was removed
};

/// Per-channel mean removal. Residual mean is below 1e-12 of channel RMS.
Centered center(const MultichannelSignal& s);

/// Sigma = (1/N) R R^T, symmetrized. Throws InvalidArgument if a channel
/// mean exceeds 1e-9 of its RMS (input must be centered).
Matrix covariance(const MultichannelSignal& centered);

struct EigenDecomposition {
  Matrix vectors;              // columns are unit eigenvectors
  std::vector<double> values;  // descending
};

/// Symmetric eigen-decomposition: closed form for 2x2, cyclic Jacobi
/// rotations otherwise (stops when off-diagonal norm < 1e-12 ||Sigma||_F).
EigenDecomposition eigendecompose(const Matrix& sigma);

/// 2-norm condition number of an arbitrary square matrix.
double condition_number(const Matrix& m);

/// Record of the centering + whitening map, invertible.
///
/// whitener = Lambda^(-1/2) U^T. (The unit-variance requirement fixes the
/// exponent at -1/2; scaling by +1/2 would not give identity covariance.)
struct WhiteningTransform {
  std::vector<double> mean;
  Matrix eigvecs;
  std::vector<double> eigvals;
  Matrix whitener;
  Matrix dewhitener;

  /// B = whitener (S - mean).
  MultichannelSignal apply(const MultichannelSignal& s) const;
  /// S = dewhitener B + mean.
  MultichannelSignal invert(const MultichannelSignal& b) const;
};

struct Whitened {
  MultichannelSignal signal;  // B, (1/N) B B^T = I
  WhiteningTransform transform;
};

/// Relative degeneracy threshold: eigenvalues <= kDegeneracy * max(eigvals)
/// mean the channels are linearly dependent.
inline constexpr double kDegeneracy = 1e-12;

/// Centers (if needed) and whitens. Throws RankDeficientError on a
/// degenerate covariance.
Whitened whiten(const MultichannelSignal& s);

MultichannelSignal dewhiten(const MultichannelSignal& b, const WhiteningTransform& t);

}  // namespace xtalk
