#pragma once

#include <span>

#include "cwvsmix/linalg.hpp"

namespace cwvsmix {

// Exponential temporal correlation over exposure periods,
// entry(t, t') = exp(-phi |t - t'|), with the factorization products every
// sweep needs cached: lower Cholesky, log-determinant, and inverse.
// Immutable after construction; rebuilt only when its phi moves.
struct ExpCorrMatrix {
  std::size_t m = 0;
  double phi = 0.0;
  Matrix entries;
  Matrix chol;
  Matrix inverse;
  double log_det = 0.0;
  double jitter = 0.0;  // diagonal jitter the factorization needed, if any
};

// Builds the m x m exponential correlation matrix.  On Cholesky failure the
// diagonal is jittered starting at 1e-10, escalating x10 up to 1e-6; past
// that a numeric_error("covariance not PD") is thrown.
ExpCorrMatrix build_exp_corr(std::size_t m, double phi);

struct KronSolveResult {
  Vector solved;      // (Sigma^{-1} kron I_r) v
  double quad_form;   // v^T (Sigma^{-1} kron I_r) v
  double log_det;     // r * log |Sigma|
};

// Applies the inverse of Sigma(phi) kron I_r to v (length m*r, ordered
// period-major: the r-block for period 1, then period 2, ...) without ever
// forming the m*r x m*r matrix.
KronSolveResult kron_weight_prior_solve(const ExpCorrMatrix& corr,
                                        std::size_t r,
                                        std::span<const double> v);

}  // namespace cwvsmix
