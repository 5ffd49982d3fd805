#include "cwvsmix/covariance.hpp"

#include <cmath>
#include <cstdlib>

#include "cwvsmix/errors.hpp"

namespace cwvsmix {

ExpCorrMatrix build_exp_corr(std::size_t m, double phi) {
  if (m < 1) throw input_error("build_exp_corr: m must be >= 1");
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    throw input_error("build_exp_corr: phi must be positive and finite");
  }
  ExpCorrMatrix out;
  out.m = m;
  out.phi = phi;
  out.entries = Matrix(m, m);
  for (std::size_t t = 0; t < m; ++t) {
    out.entries(t, t) = 1.0;
    for (std::size_t s = t + 1; s < m; ++s) {
      const double v = std::exp(-phi * static_cast<double>(s - t));
      out.entries(t, s) = v;
      out.entries(s, t) = v;
    }
  }

  double jitter = 0.0;
  while (true) {
    Matrix work = out.entries;
    if (jitter > 0.0) {
      for (std::size_t t = 0; t < m; ++t) work(t, t) += jitter;
    }
    if (auto l = linalg::chol_lower(work)) {
      out.chol = std::move(*l);
      out.jitter = jitter;
      break;
    }
    jitter = (jitter == 0.0) ? 1e-10 : jitter * 10.0;
    if (jitter > 1e-6) throw numeric_error("covariance not PD");
  }
  out.log_det = linalg::chol_log_det(out.chol);
  out.inverse = linalg::chol_inverse(out.chol);
  return out;
}

KronSolveResult kron_weight_prior_solve(const ExpCorrMatrix& corr,
                                        std::size_t r,
                                        std::span<const double> v) {
  const std::size_t m = corr.m;
  if (r < 1) throw input_error("kron_weight_prior_solve: r must be >= 1");
  if (v.size() != m * r) {
    throw input_error("kron_weight_prior_solve: length mismatch");
  }
  KronSolveResult out;
  out.solved.assign(m * r, 0.0);
  // Block t of the result is sum_s inverse(t, s) * block_s.
  for (std::size_t t = 0; t < m; ++t) {
    double* dst = out.solved.data() + t * r;
    for (std::size_t s = 0; s < m; ++s) {
      const double a = corr.inverse(t, s);
      const double* src = v.data() + s * r;
      for (std::size_t c = 0; c < r; ++c) dst[c] += a * src[c];
    }
  }
  out.quad_form = linalg::dot(v, out.solved);
  out.log_det = static_cast<double>(r) * corr.log_det;
  return out;
}

}  // namespace cwvsmix
