#pragma once

// Dense brute-force oracle for the equivalence tests.  Everything here is
// computed from the primary parameters with Eigen and naive per-entry loops,
// independent of the library's kernels, linear algebra, and caches.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cwvsmix/engine.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd to_eigen(const cwvsmix::Matrix& m) {
  MatrixXd out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, j);
  }
  return out;
}

inline VectorXd to_eigen(const std::vector<double>& v) {
  VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

// Direct evaluation of the latent-to-weight transform and the weighted
// exposure, straight from the definitions.
struct Weights {
  std::vector<double> main, inter;
};

inline Weights weights_at(const cwvsmix::ChainState& s, std::size_t t,
                          std::size_t q) {
  Weights w;
  w.main.assign(q, 0.0);
  w.inter.assign(q * (q - 1) / 2, 0.0);
  const auto& ls = s.field.lambda_star;
  double d = 0.0;
  for (std::size_t j = 0; j < q; ++j) d += std::max(ls(j, t), 0.0);
  std::size_t idx = 0;
  for (std::size_t j = 0; j + 1 < q; ++j) {
    for (std::size_t k = j + 1; k < q; ++k, ++idx) {
      if (ls(j, t) > 0.0 && ls(k, t) > 0.0) {
        d += std::max(ls(q + idx, t), 0.0);
      }
    }
  }
  if (d == 0.0) return w;
  for (std::size_t j = 0; j < q; ++j) w.main[j] = std::max(ls(j, t), 0.0) / d;
  idx = 0;
  for (std::size_t j = 0; j + 1 < q; ++j) {
    for (std::size_t k = j + 1; k < q; ++k, ++idx) {
      if (ls(j, t) > 0.0 && ls(k, t) > 0.0) {
        w.inter[idx] = std::max(ls(q + idx, t), 0.0) / d;
      }
    }
  }
  return w;
}

// n x m weighted design matrix rebuilt from scratch.
inline MatrixXd design(const cwvsmix::ChainState& s,
                       const cwvsmix::ExposureDataset& data) {
  const std::size_t n = data.n(), m = data.m(), q = data.q();
  MatrixXd g(n, m);
  for (std::size_t t = 0; t < m; ++t) {
    const Weights w = weights_at(s, t, q);
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < q; ++j) v += w.main[j] * data.z.at(i, j, t);
      std::size_t idx = 0;
      for (std::size_t j = 0; j + 1 < q; ++j) {
        for (std::size_t k = j + 1; k < q; ++k, ++idx) {
          v += w.inter[idx] * data.z.at(i, j, t) * data.z.at(i, k, t);
        }
      }
      g(i, t) = v;
    }
  }
  return g;
}

inline MatrixXd design_star(const cwvsmix::ChainState& s,
                            const cwvsmix::ExposureDataset& data) {
  MatrixXd g = design(s, data);
  for (std::size_t t = 0; t < data.m(); ++t) {
    g.col(t) *= static_cast<double>(s.risk.gamma[t]);
  }
  return g;
}

inline MatrixXd exp_corr(std::size_t m, double phi) {
  MatrixXd out(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out(i, j) = std::exp(-phi * std::fabs(static_cast<double>(i) -
                                            static_cast<double>(j)));
    }
  }
  return out;
}

inline MatrixXd kron_identity(const MatrixXd& a, std::size_t r) {
  const std::size_t m = a.rows();
  MatrixXd out = MatrixXd::Zero(m * r, m * r);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < r; ++c) out(i * r + c, j * r + c) = a(i, j);
    }
  }
  return out;
}

struct MvnParams {
  VectorXd mean;
  MatrixXd cov;
};

inline VectorXd zeta(const cwvsmix::ChainState& s,
                     const cwvsmix::ExposureDataset& data) {
  VectorXd z(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    z(i) = (data.y[i] - 0.5) / s.pg_latents[i];
  }
  return z;
}

inline VectorXd alpha_vec(const cwvsmix::ChainState& s) {
  VectorXd a(s.risk.theta.size());
  for (std::size_t t = 0; t < s.risk.theta.size(); ++t) {
    a(t) = s.risk.A11 * s.risk.delta1[t] * s.risk.gamma[t];
  }
  return a;
}

inline MvnParams beta_conditional(const cwvsmix::ChainState& s,
                                  const cwvsmix::ExposureDataset& data,
                                  const cwvsmix::Priors& priors) {
  const MatrixXd x = to_eigen(data.x);
  const MatrixXd omega = to_eigen(s.pg_latents).asDiagonal();
  const MatrixXd prec =
      x.transpose() * omega * x +
      MatrixXd::Identity(data.p(), data.p()) / priors.sigma2_beta;
  MvnParams out;
  out.cov = prec.inverse();
  out.mean = out.cov * (x.transpose() * omega * (zeta(s, data) - design(s, data) * alpha_vec(s)));
  return out;
}

inline MvnParams delta1_conditional(const cwvsmix::ChainState& s,
                                    const cwvsmix::ExposureDataset& data) {
  const std::size_t m = data.m();
  const MatrixXd omega = to_eigen(s.pg_latents).asDiagonal();
  const MatrixXd gs = design_star(s, data);
  const MatrixXd prec =
      s.risk.A11 * s.risk.A11 * gs.transpose() * omega * gs +
      s.risk.A21 * s.risk.A21 * MatrixXd::Identity(m, m) +
      exp_corr(m, s.risk.phi1).inverse();
  const VectorXd u =
      zeta(s, data) - to_eigen(data.x) * to_eigen(s.beta);
  const VectorXd b = s.risk.A11 * gs.transpose() * omega * u +
                     s.risk.A21 * (to_eigen(s.risk.gamma_star) -
                                   s.risk.A22 * to_eigen(s.risk.delta2));
  MvnParams out;
  out.cov = prec.inverse();
  out.mean = out.cov * b;
  return out;
}

inline MvnParams delta2_conditional(const cwvsmix::ChainState& s,
                                    const cwvsmix::ExposureDataset& data) {
  const std::size_t m = data.m();
  const MatrixXd prec = s.risk.A22 * s.risk.A22 * MatrixXd::Identity(m, m) +
                        exp_corr(m, s.risk.phi2).inverse();
  const VectorXd b =
      s.risk.A22 * (to_eigen(s.risk.gamma_star) -
                    s.risk.A21 * to_eigen(s.risk.delta1));
  MvnParams out;
  out.cov = prec.inverse();
  out.mean = out.cov * b;
  return out;
}

// kappa(t): the Bernoulli full-conditional probability, from the displayed
// ratio evaluated in log space with dense algebra.
inline double gamma_kappa(const cwvsmix::ChainState& s,
                          const cwvsmix::ExposureDataset& data,
                          std::size_t t) {
  const MatrixXd g = design(s, data);
  const MatrixXd omega = to_eigen(s.pg_latents).asDiagonal();
  const VectorXd base =
      zeta(s, data) - to_eigen(data.x) * to_eigen(s.beta);
  VectorXd alpha1 = alpha_vec(s);
  VectorXd alpha0 = alpha_vec(s);
  alpha1(t) = s.risk.A11 * s.risk.delta1[t];
  alpha0(t) = 0.0;
  const VectorXd r1 = base - g * alpha1;
  const VectorXd r0 = base - g * alpha0;
  const double q1 = r1.transpose() * omega * r1;
  const double q0 = r0.transpose() * omega * r0;
  const double eta = s.risk.A21 * s.risk.delta1[t] +
                     s.risk.A22 * s.risk.delta2[t];
  // Phi in log space via erfc.
  auto log_phi = [](double x) {
    return std::log(0.5 * std::erfc(-x / std::sqrt(2.0)));
  };
  const double l1 = -0.5 * q1 + log_phi(eta);
  const double l0 = -0.5 * q0 + log_phi(-eta);
  const double hi = std::max(l1, l0);
  return std::exp(l1 - hi) / (std::exp(l1 - hi) + std::exp(l0 - hi));
}

inline double log_target_a21(const cwvsmix::ChainState& s, double value,
                             double sigma2_a) {
  double ss = 0.0;
  for (std::size_t t = 0; t < s.risk.delta1.size(); ++t) {
    const double e = s.risk.gamma_star[t] - value * s.risk.delta1[t] -
                     s.risk.A22 * s.risk.delta2[t];
    ss += e * e;
  }
  return -0.5 * ss - 0.5 * value * value / sigma2_a;
}

inline double log_target_ln_a22(const cwvsmix::ChainState& s, double psi,
                                double sigma2_a) {
  const double a22 = std::exp(psi);
  double ss = 0.0;
  for (std::size_t t = 0; t < s.risk.delta1.size(); ++t) {
    const double e = s.risk.gamma_star[t] - s.risk.A21 * s.risk.delta1[t] -
                     a22 * s.risk.delta2[t];
    ss += e * e;
  }
  return -0.5 * ss - 0.5 * psi * psi / sigma2_a;
}

inline double log_target_ln_a11(const cwvsmix::ChainState& s,
                                const cwvsmix::ExposureDataset& data,
                                double psi, double sigma2_a) {
  const MatrixXd omega = to_eigen(s.pg_latents).asDiagonal();
  const VectorXd r = zeta(s, data) - to_eigen(data.x) * to_eigen(s.beta) -
                     std::exp(psi) * design_star(s, data) *
                         to_eigen(s.risk.delta1);
  const double q = r.transpose() * omega * r;
  return -0.5 * q - 0.5 * psi * psi / sigma2_a;
}

inline double log_target_ln_phi(const cwvsmix::ChainState& s, int which,
                                double psi, double alpha_phi,
                                double beta_phi) {
  const std::size_t m = s.risk.delta1.size();
  const MatrixXd sigma = exp_corr(m, std::exp(psi));
  const VectorXd d =
      to_eigen(which == 1 ? s.risk.delta1 : s.risk.delta2);
  const double quad = d.transpose() * sigma.inverse() * d;
  return -0.5 * std::log(sigma.determinant()) - 0.5 * quad + alpha_phi * psi -
         beta_phi * std::exp(psi);
}

inline VectorXd lambda_flat(const cwvsmix::ChainState& s) {
  const auto& ls = s.field.lambda_star;
  VectorXd v(ls.rows() * ls.cols());
  std::size_t k = 0;
  for (std::size_t t = 0; t < ls.cols(); ++t) {
    for (std::size_t c = 0; c < ls.rows(); ++c) v(k++) = ls(c, t);
  }
  return v;
}

inline double log_target_ln_phi_lambda(const cwvsmix::ChainState& s,
                                       double psi, double alpha_phi,
                                       double beta_phi) {
  const std::size_t m = s.field.m;
  const std::size_t r = s.field.lambda_star.rows();
  const MatrixXd sigma = exp_corr(m, std::exp(psi));
  const MatrixXd big = kron_identity(sigma, r);
  const VectorXd v = lambda_flat(s);
  const double quad = v.transpose() * big.inverse() * v;
  return -0.5 * static_cast<double>(r) * std::log(sigma.determinant()) -
         0.5 * quad + alpha_phi * psi - beta_phi * std::exp(psi);
}

// Full log target (likelihood quadratic form + lambda* prior) with block t
// of lambda* replaced by `block`.
inline double lambda_block_target(cwvsmix::ChainState s,
                                  const cwvsmix::ExposureDataset& data,
                                  std::size_t t,
                                  const std::vector<double>& block) {
  for (std::size_t c = 0; c < block.size(); ++c) {
    s.field.lambda_star(c, t) = block[c];
  }
  const MatrixXd omega = to_eigen(s.pg_latents).asDiagonal();
  const VectorXd r = zeta(s, data) - to_eigen(data.x) * to_eigen(s.beta) -
                     s.risk.A11 * design_star(s, data) *
                         to_eigen(s.risk.delta1);
  const double q_lik = r.transpose() * omega * r;
  const std::size_t m = s.field.m;
  const std::size_t rr = s.field.lambda_star.rows();
  const MatrixXd big = kron_identity(exp_corr(m, s.phi_lambda), rr);
  const VectorXd v = lambda_flat(s);
  const double q_prior = v.transpose() * big.inverse() * v;
  return -0.5 * q_lik - 0.5 * q_prior;
}

// Direct Bernoulli-logit log likelihood.
inline double log_likelihood(const cwvsmix::ChainState& s,
                             const cwvsmix::ExposureDataset& data) {
  const MatrixXd g = design(s, data);
  const VectorXd lin =
      to_eigen(data.x) * to_eigen(s.beta) + g * alpha_vec(s);
  double ll = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    ll += data.y[i] * lin(i) - std::log1p(std::exp(lin(i)));
  }
  return ll;
}

}  // namespace oracle
