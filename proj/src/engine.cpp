#include "cwvsmix/engine.hpp"

#include <cmath>

#include "cwvsmix/errors.hpp"
#include "cwvsmix/kernels.hpp"
#include "cwvsmix/stats_math.hpp"

namespace cwvsmix {

namespace {

double log_sum_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + stats::log1pexp(lo - hi);
}

constexpr double kMinLnStep = -18.0;  // ~1.5e-8
constexpr double kMaxLnStep = 7.0;    // ~1100

}  // namespace

Engine::Engine(const ExposureDataset& data, const Priors& priors,
               const SweepConfig& cfg, RngStream rng)
    : data_(data), priors_(priors), cfg_(cfg), rng_(std::move(rng)) {
  if (data_.n() == 0 || data_.m() == 0 || data_.q() == 0) {
    throw input_error("engine: empty dataset");
  }
  const double ln0 = std::log(cfg_.initial_step);
  step_a11_.ln_step = step_a21_.ln_step = step_a22_.ln_step = ln0;
  step_psi1_.ln_step = step_psi2_.ln_step = step_psi_lambda_.ln_step = ln0;
  step_lambda_.assign(data_.m(), StepState{ln0, 0});
  accept_.lambda_block.assign(data_.m(), AcceptanceCounter{});
  init_state();
}

double Engine::frozen_weight() const {
  const double q = static_cast<double>(data_.q());
  return 2.0 / (q * (q + 1.0));
}

void Engine::init_state() {
  const std::size_t n = data_.n();
  const std::size_t m = data_.m();
  const std::size_t q = data_.q();
  const std::size_t r = r_components(q);

  state_.beta.assign(data_.p(), 0.0);
  state_.field = LatentWeightField(m, q);
  state_.weights = Matrix(r, m);
  state_.phi_lambda = 1.0;
  state_.risk.theta.assign(m, 0.0);
  state_.risk.gamma.assign(m, 0);
  state_.risk.gamma_star.assign(m, 0.0);
  state_.risk.eta.assign(m, 0.0);
  state_.risk.delta1.assign(m, 0.0);
  state_.risk.delta2.assign(m, 0.0);
  state_.risk.A11 = 1.0;
  state_.risk.A21 = 0.0;
  state_.risk.A22 = 1.0;
  state_.risk.phi1 = 1.0;
  state_.risk.phi2 = 1.0;
  state_.g = Matrix(n, m);
  state_.g_star = Matrix(n, m);
  state_.alpha.assign(m, 0.0);
  state_.pg_latents.assign(n, 0.25);

  corr1_ = build_exp_corr(m, state_.risk.phi1);
  corr2_ = build_exp_corr(m, state_.risk.phi2);
  corr_lambda_ = build_exp_corr(m, state_.phi_lambda);

  if (cfg_.freeze_weights) {
    const double v = frozen_weight();
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t c = 0; c < r; ++c) state_.weights(c, t) = v;
    }
  } else {
    // lambda* from its prior: each of the r components is an m-vector with
    // covariance Sigma(phi_lambda); drawn component-major.
    for (std::size_t c = 0; c < r; ++c) {
      const Vector zero(m, 0.0);
      const Vector draw = draw_mvn(zero, corr_lambda_.chol, rng_);
      for (std::size_t t = 0; t < m; ++t) state_.field.lambda_star(c, t) = draw[t];
    }
  }

  // gamma* from its prior at eta = 0 and gamma = 1{gamma* > 0}.
  for (std::size_t t = 0; t < m; ++t) {
    state_.risk.gamma_star[t] = draw_std_normal(rng_);
    state_.risk.gamma[t] =
        (!cfg_.force_gamma_zero && state_.risk.gamma_star[t] > 0.0) ? 1 : 0;
  }

  rebuild_caches();
  update_pg_latents();
}

void Engine::rebuild_caches() {
  refresh_caches(state_, data_, /*weights_from_field=*/!cfg_.freeze_weights);
  corr1_ = build_exp_corr(data_.m(), state_.risk.phi1);
  corr2_ = build_exp_corr(data_.m(), state_.risk.phi2);
  corr_lambda_ = build_exp_corr(data_.m(), state_.phi_lambda);
}

void Engine::notify_outcomes_changed() {
  const std::size_t n = data_.n();
  for (std::size_t i = 0; i < n; ++i) {
    state_.zeta[i] = (data_.y[i] - 0.5) / state_.pg_latents[i];
    state_.resid[i] = state_.zeta[i] - state_.x_beta[i] - state_.g_alpha[i];
  }
}

void Engine::refresh_g_alpha_and_resid() {
  const std::size_t n = data_.n();
  const std::size_t m = data_.m();
  state_.g_alpha.assign(n, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    if (state_.alpha[t] != 0.0) {
      kernels::axpy(state_.alpha[t], state_.g.col(t), state_.g_alpha.data(), n);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    state_.resid[i] = state_.zeta[i] - state_.x_beta[i] - state_.g_alpha[i];
  }
}

void Engine::refresh_eta() {
  for (std::size_t t = 0; t < data_.m(); ++t) {
    state_.risk.eta[t] = state_.risk.A21 * state_.risk.delta1[t] +
                         state_.risk.A22 * state_.risk.delta2[t];
  }
}

void Engine::refresh_theta_alpha() {
  for (std::size_t t = 0; t < data_.m(); ++t) {
    state_.risk.theta[t] = state_.risk.A11 * state_.risk.delta1[t];
    state_.alpha[t] = state_.risk.theta[t] * state_.risk.gamma[t];
  }
}

Matrix Engine::chol_with_jitter(Matrix m, const char* what) const {
  double jitter = 0.0;
  while (true) {
    Matrix work = m;
    if (jitter > 0.0) {
      for (std::size_t i = 0; i < work.rows(); ++i) work(i, i) += jitter;
    }
    if (auto l = linalg::chol_lower(work)) return *l;
    jitter = (jitter == 0.0) ? 1e-10 : jitter * 10.0;
    if (jitter > 1e-6) {
      throw numeric_error(std::string(what) + ": covariance not PD");
    }
  }
}

Vector Engine::draw_from_conditional(const GaussianConditional& cond) {
  Vector z(cond.mean.size());
  for (double& v : z) v = draw_std_normal(rng_);
  const Vector shift = linalg::backward_solve_t(cond.prec_chol, z);
  Vector out = cond.mean;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += shift[i];
  return out;
}

Vector Engine::zeta_minus_xbeta() const {
  Vector u(data_.n());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = state_.zeta[i] - state_.x_beta[i];
  }
  return u;
}

Vector Engine::gstar_delta1() const {
  Vector h(data_.n(), 0.0);
  for (std::size_t t = 0; t < data_.m(); ++t) {
    if (state_.risk.delta1[t] != 0.0 && state_.risk.gamma[t] != 0) {
      kernels::axpy(state_.risk.delta1[t], state_.g_star.col(t), h.data(),
                    data_.n());
    }
  }
  return h;
}

void Engine::adapt(StepState& step, bool accepted) {
  if (!adapting_) return;
  ++step.n;
  const double gain = 1.0 / std::pow(static_cast<double>(step.n), 0.6);
  step.ln_step += gain * ((accepted ? 1.0 : 0.0) - cfg_.target_accept);
  step.ln_step = std::clamp(step.ln_step, kMinLnStep, kMaxLnStep);
}

// --- Gibbs blocks ----------------------------------------------------------

void Engine::update_pg_latents() {
  const std::size_t n = data_.n();
  for (std::size_t i = 0; i < n; ++i) {
    const double lin = state_.x_beta[i] + state_.g_alpha[i];
    state_.pg_latents[i] = draw_polya_gamma(1, lin, rng_);
    state_.zeta[i] = (data_.y[i] - 0.5) / state_.pg_latents[i];
    state_.resid[i] = state_.zeta[i] - state_.x_beta[i] - state_.g_alpha[i];
  }
}

GaussianConditional Engine::beta_conditional() const {
  const std::size_t p = data_.p();
  const std::size_t n = data_.n();
  GaussianConditional cond;
  cond.precision = Matrix(p, p);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      const double v = kernels::wdot(state_.pg_latents.data(), data_.x.col(a),
                                     data_.x.col(b), n);
      cond.precision(a, b) = v;
      cond.precision(b, a) = v;
    }
    cond.precision(a, a) += 1.0 / priors_.sigma2_beta;
  }
  // zeta - G alpha = resid + X beta
  Vector u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = state_.zeta[i] - state_.g_alpha[i];
  Vector b(p);
  for (std::size_t a = 0; a < p; ++a) {
    b[a] = kernels::wdot(state_.pg_latents.data(), data_.x.col(a), u.data(), n);
  }
  cond.prec_chol = chol_with_jitter(cond.precision, "beta conditional");
  cond.mean = linalg::chol_solve(cond.prec_chol, b);
  return cond;
}

void Engine::update_beta() {
  state_.beta = draw_from_conditional(beta_conditional());
  state_.x_beta = linalg::matvec(data_.x, state_.beta);
  for (std::size_t i = 0; i < data_.n(); ++i) {
    state_.resid[i] = state_.zeta[i] - state_.x_beta[i] - state_.g_alpha[i];
  }
}

double Engine::lambda_block_log_ratio(std::size_t t,
                                      std::span<const double> candidate) const {
  const std::size_t n = data_.n();
  const std::size_t m = data_.m();
  const std::size_t q = data_.q();
  const std::size_t r = r_components(q);
  if (candidate.size() != r) {
    throw input_error("lambda_block_log_ratio: block length mismatch");
  }

  double delta = 0.0;
  if (state_.risk.gamma[t] != 0) {
    const WeightVector w = transform_weights(candidate, q);
    Vector cand_col(n);
    design_column(w, data_.z, t, cand_col.data());
    // Residual shift: resid' = resid - alpha_t * (cand_col - cur_col).
    Vector diff(n);
    const double* cur_col = state_.g.col(t);
    for (std::size_t i = 0; i < n; ++i) diff[i] = cand_col[i] - cur_col[i];
    const double q_new = kernels::wsse_shift(
        state_.pg_latents.data(), state_.resid.data(), diff.data(),
        state_.alpha[t], n);
    const double q_old =
        kernels::wsse(state_.pg_latents.data(), state_.resid.data(), n);
    delta += -0.5 * (q_new - q_old);
  }

  // Prior quadratic form change from swapping block t.
  const Matrix& prec = corr_lambda_.inverse;
  const double* cur = state_.field.lambda_star.col(t);
  double self_new = 0.0, self_old = 0.0, cross = 0.0;
  for (std::size_t c = 0; c < r; ++c) {
    self_new += candidate[c] * candidate[c];
    self_old += cur[c] * cur[c];
  }
  for (std::size_t s = 0; s < m; ++s) {
    if (s == t) continue;
    const double* bs = state_.field.lambda_star.col(s);
    double d = 0.0;
    for (std::size_t c = 0; c < r; ++c) d += (candidate[c] - cur[c]) * bs[c];
    cross += prec(t, s) * d;
  }
  const double dq = prec(t, t) * (self_new - self_old) + 2.0 * cross;
  delta += -0.5 * dq;
  return delta;
}

void Engine::update_lambda_star() {
  if (cfg_.freeze_weights) return;
  const std::size_t n = data_.n();
  const std::size_t m = data_.m();
  const std::size_t q = data_.q();
  const std::size_t r = r_components(q);
  Vector cand(r), cand_col(n), diff(n);

  for (std::size_t t = 0; t < m; ++t) {
    const double step = std::exp(step_lambda_[t].ln_step);
    const double* cur = state_.field.lambda_star.col(t);
    for (std::size_t c = 0; c < r; ++c) {
      cand[c] = cur[c] + step * draw_std_normal(rng_);
    }
    const double log_ratio = lambda_block_log_ratio(t, cand);
    ++accept_.lambda_block[t].proposals;
    const bool ok = std::log(rng_.uniform()) < log_ratio;
    if (ok) {
      ++accept_.lambda_block[t].accepts;
      const WeightVector w = transform_weights(cand, q);
      for (std::size_t c = 0; c < r; ++c) state_.field.lambda_star(c, t) = cand[c];
      for (std::size_t j = 0; j < q; ++j) state_.weights(j, t) = w.main[j];
      for (std::size_t c = 0; c < w.inter.size(); ++c) {
        state_.weights(q + c, t) = w.inter[c];
      }
      design_column(w, data_.z, t, cand_col.data());
      double* gcol = state_.g.col(t);
      for (std::size_t i = 0; i < n; ++i) {
        diff[i] = cand_col[i] - gcol[i];
        gcol[i] = cand_col[i];
      }
      if (state_.risk.gamma[t] != 0) {
        double* gscol = state_.g_star.col(t);
        for (std::size_t i = 0; i < n; ++i) gscol[i] = cand_col[i];
        if (state_.alpha[t] != 0.0) {
          kernels::axpy(state_.alpha[t], diff.data(), state_.g_alpha.data(), n);
          kernels::axpy(-state_.alpha[t], diff.data(), state_.resid.data(), n);
        }
      }
    }
    adapt(step_lambda_[t], ok);
  }
}

double Engine::gamma_inclusion_prob(std::size_t t) const {
  const std::size_t n = data_.n();
  const double theta_t = state_.risk.theta[t];
  const double cur = static_cast<double>(state_.risk.gamma[t]);
  const double q1 = kernels::wsse_shift(state_.pg_latents.data(),
                                        state_.resid.data(), state_.g.col(t),
                                        (1.0 - cur) * theta_t, n);
  const double q0 = kernels::wsse_shift(state_.pg_latents.data(),
                                        state_.resid.data(), state_.g.col(t),
                                        (0.0 - cur) * theta_t, n);
  const double eta_t = state_.risk.eta[t];
  const double log_p1 = -0.5 * q1 + stats::log_norm_cdf(eta_t);
  const double log_p0 = -0.5 * q0 + stats::log_norm_cdf(-eta_t);
  return std::exp(log_p1 - log_sum_exp(log_p1, log_p0));
}

void Engine::update_gamma() {
  if (cfg_.force_gamma_zero) return;
  const std::size_t n = data_.n();
  for (std::size_t t = 0; t < data_.m(); ++t) {
    const double kappa = gamma_inclusion_prob(t);
    const int gnew = rng_.uniform() < kappa ? 1 : 0;
    const int gold = state_.risk.gamma[t];
    if (gnew != gold) {
      const double shift = (gnew - gold) * state_.risk.theta[t];
      state_.risk.gamma[t] = gnew;
      state_.alpha[t] = state_.risk.theta[t] * gnew;
      const double* gcol = state_.g.col(t);
      double* gscol = state_.g_star.col(t);
      if (gnew == 1) {
        for (std::size_t i = 0; i < n; ++i) gscol[i] = gcol[i];
      } else {
        for (std::size_t i = 0; i < n; ++i) gscol[i] = 0.0;
      }
      if (shift != 0.0) {
        kernels::axpy(shift, gcol, state_.g_alpha.data(), n);
        kernels::axpy(-shift, gcol, state_.resid.data(), n);
      }
    }
  }
}

void Engine::update_gamma_star() {
  for (std::size_t t = 0; t < data_.m(); ++t) {
    const double eta_t = state_.risk.eta[t];
    if (cfg_.force_gamma_zero) {
      state_.risk.gamma_star[t] = eta_t + draw_std_normal(rng_);
    } else {
      const TruncationSide side = state_.risk.gamma[t]
                                      ? TruncationSide::above_zero
                                      : TruncationSide::at_most_zero;
      state_.risk.gamma_star[t] = draw_truncated_normal(eta_t, 1.0, side, rng_);
    }
  }
}

GaussianConditional Engine::delta2_conditional() const {
  const std::size_t m = data_.m();
  GaussianConditional cond;
  cond.precision = corr2_.inverse;
  const double a22sq = state_.risk.A22 * state_.risk.A22;
  for (std::size_t t = 0; t < m; ++t) cond.precision(t, t) += a22sq;
  Vector b(m);
  for (std::size_t t = 0; t < m; ++t) {
    b[t] = state_.risk.A22 *
           (state_.risk.gamma_star[t] - state_.risk.A21 * state_.risk.delta1[t]);
  }
  cond.prec_chol = chol_with_jitter(cond.precision, "delta2 conditional");
  cond.mean = linalg::chol_solve(cond.prec_chol, b);
  return cond;
}

void Engine::update_delta2() {
  state_.risk.delta2 = draw_from_conditional(delta2_conditional());
  refresh_eta();
}

GaussianConditional Engine::delta1_conditional() const {
  const std::size_t m = data_.m();
  const std::size_t n = data_.n();
  GaussianConditional cond;
  cond.precision = corr1_.inverse;
  const double a11sq = state_.risk.A11 * state_.risk.A11;
  const double a21sq = state_.risk.A21 * state_.risk.A21;
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t s = t; s < m; ++s) {
      const double gram = kernels::wdot(state_.pg_latents.data(),
                                        state_.g_star.col(t),
                                        state_.g_star.col(s), n);
      cond.precision(t, s) += a11sq * gram;
      if (s != t) cond.precision(s, t) += a11sq * gram;
    }
    cond.precision(t, t) += a21sq;
  }
  const Vector u = zeta_minus_xbeta();
  Vector b(m);
  for (std::size_t t = 0; t < m; ++t) {
    b[t] = state_.risk.A11 * kernels::wdot(state_.pg_latents.data(),
                                           state_.g_star.col(t), u.data(), n) +
           state_.risk.A21 * (state_.risk.gamma_star[t] -
                              state_.risk.A22 * state_.risk.delta2[t]);
  }
  cond.prec_chol = chol_with_jitter(cond.precision, "delta1 conditional");
  cond.mean = linalg::chol_solve(cond.prec_chol, b);
  return cond;
}

void Engine::update_delta1() {
  state_.risk.delta1 = draw_from_conditional(delta1_conditional());
  refresh_theta_alpha();
  refresh_eta();
  refresh_g_alpha_and_resid();
}

// --- Metropolis blocks ------------------------------------------------------

double Engine::log_target_a21(double value) const {
  double ss = 0.0;
  for (std::size_t t = 0; t < data_.m(); ++t) {
    const double e = state_.risk.gamma_star[t] -
                     value * state_.risk.delta1[t] -
                     state_.risk.A22 * state_.risk.delta2[t];
    ss += e * e;
  }
  return -0.5 * ss - 0.5 * value * value / priors_.sigma2_A;
}

double Engine::log_target_ln_a22(double psi) const {
  const double a22 = std::exp(psi);
  double ss = 0.0;
  for (std::size_t t = 0; t < data_.m(); ++t) {
    const double e = state_.risk.gamma_star[t] -
                     state_.risk.A21 * state_.risk.delta1[t] -
                     a22 * state_.risk.delta2[t];
    ss += e * e;
  }
  return -0.5 * ss - 0.5 * psi * psi / priors_.sigma2_A;
}

double Engine::log_target_ln_a11(double psi) const {
  const double a11 = std::exp(psi);
  const Vector u = zeta_minus_xbeta();
  const Vector h = gstar_delta1();
  const double q = kernels::wsse_shift(state_.pg_latents.data(), u.data(),
                                       h.data(), a11, data_.n());
  return -0.5 * q - 0.5 * psi * psi / priors_.sigma2_A;
}

void Engine::update_a21() {
  const double step = std::exp(step_a21_.ln_step);
  const double cand = state_.risk.A21 + step * draw_std_normal(rng_);
  const double log_ratio = log_target_a21(cand) - log_target_a21(state_.risk.A21);
  ++accept_.a21.proposals;
  const bool ok = std::log(rng_.uniform()) < log_ratio;
  if (ok) {
    ++accept_.a21.accepts;
    state_.risk.A21 = cand;
    refresh_eta();
  }
  adapt(step_a21_, ok);
}

void Engine::update_a22() {
  const double step = std::exp(step_a22_.ln_step);
  const double psi_cur = std::log(state_.risk.A22);
  const double psi_cand = psi_cur + step * draw_std_normal(rng_);
  const double log_ratio =
      log_target_ln_a22(psi_cand) - log_target_ln_a22(psi_cur);
  ++accept_.a22.proposals;
  const bool ok = std::log(rng_.uniform()) < log_ratio;
  if (ok) {
    ++accept_.a22.accepts;
    state_.risk.A22 = std::exp(psi_cand);
    refresh_eta();
  }
  adapt(step_a22_, ok);
}

void Engine::update_a11() {
  const double step = std::exp(step_a11_.ln_step);
  const double psi_cur = std::log(state_.risk.A11);
  const double psi_cand = psi_cur + step * draw_std_normal(rng_);
  const double log_ratio =
      log_target_ln_a11(psi_cand) - log_target_ln_a11(psi_cur);
  ++accept_.a11.proposals;
  const bool ok = std::log(rng_.uniform()) < log_ratio;
  if (ok) {
    ++accept_.a11.accepts;
    state_.risk.A11 = std::exp(psi_cand);
    refresh_theta_alpha();
    refresh_g_alpha_and_resid();
  }
  adapt(step_a11_, ok);
}

double Engine::log_target_ln_phi(int which, double psi) const {
  const Vector& delta = (which == 1) ? state_.risk.delta1 : state_.risk.delta2;
  const ExpCorrMatrix corr = build_exp_corr(data_.m(), std::exp(psi));
  const Vector solved = linalg::chol_solve(corr.chol, delta);
  const double quad = linalg::dot(delta, solved);
  return -0.5 * corr.log_det - 0.5 * quad + priors_.alpha_phi * psi -
         priors_.beta_phi * std::exp(psi);
}

double Engine::log_target_ln_phi_lambda(double psi) const {
  const std::size_t r = r_components(data_.q());
  const ExpCorrMatrix corr = build_exp_corr(data_.m(), std::exp(psi));
  const std::span<const double> flat(state_.field.lambda_star.data(),
                                     state_.field.lambda_star.size());
  const KronSolveResult k = kron_weight_prior_solve(corr, r, flat);
  return -0.5 * k.log_det - 0.5 * k.quad_form + priors_.alpha_phi * psi -
         priors_.beta_phi * std::exp(psi);
}

void Engine::update_phi1() {
  const double step = std::exp(step_psi1_.ln_step);
  const double psi_cur = std::log(state_.risk.phi1);
  const double psi_cand = psi_cur + step * draw_std_normal(rng_);
  ++accept_.psi1.proposals;
  bool ok = false;
  try {
    const double log_ratio =
        log_target_ln_phi(1, psi_cand) - log_target_ln_phi(1, psi_cur);
    ok = std::log(rng_.uniform()) < log_ratio;
  } catch (const std::runtime_error&) {
    rng_.uniform();  // keep the draw count fixed when the candidate is unusable
  }
  if (ok) {
    ++accept_.psi1.accepts;
    state_.risk.phi1 = std::exp(psi_cand);
    corr1_ = build_exp_corr(data_.m(), state_.risk.phi1);
  }
  adapt(step_psi1_, ok);
}

void Engine::update_phi2() {
  const double step = std::exp(step_psi2_.ln_step);
  const double psi_cur = std::log(state_.risk.phi2);
  const double psi_cand = psi_cur + step * draw_std_normal(rng_);
  ++accept_.psi2.proposals;
  bool ok = false;
  try {
    const double log_ratio =
        log_target_ln_phi(2, psi_cand) - log_target_ln_phi(2, psi_cur);
    ok = std::log(rng_.uniform()) < log_ratio;
  } catch (const std::runtime_error&) {
    rng_.uniform();
  }
  if (ok) {
    ++accept_.psi2.accepts;
    state_.risk.phi2 = std::exp(psi_cand);
    corr2_ = build_exp_corr(data_.m(), state_.risk.phi2);
  }
  adapt(step_psi2_, ok);
}

void Engine::update_phi_lambda() {
  if (cfg_.freeze_weights) return;
  const double step = std::exp(step_psi_lambda_.ln_step);
  const double psi_cur = std::log(state_.phi_lambda);
  const double psi_cand = psi_cur + step * draw_std_normal(rng_);
  ++accept_.psi_lambda.proposals;
  bool ok = false;
  try {
    const double log_ratio = log_target_ln_phi_lambda(psi_cand) -
                             log_target_ln_phi_lambda(psi_cur);
    ok = std::log(rng_.uniform()) < log_ratio;
  } catch (const std::runtime_error&) {
    rng_.uniform();
  }
  if (ok) {
    ++accept_.psi_lambda.accepts;
    state_.phi_lambda = std::exp(psi_cand);
    corr_lambda_ = build_exp_corr(data_.m(), state_.phi_lambda);
  }
  adapt(step_psi_lambda_, ok);
}

// --- Sweep / run ------------------------------------------------------------

void Engine::sweep() {
  update_pg_latents();
  update_beta();
  update_lambda_star();
  update_phi_lambda();
  update_delta1();
  update_a11();
  update_gamma();
  update_gamma_star();
  update_delta2();
  update_a21();
  update_a22();
  update_phi1();
  update_phi2();
  ++sweeps_done_;

  if (cfg_.refresh_every > 0 && sweeps_done_ % cfg_.refresh_every == 0) {
    refresh_caches(state_, data_, !cfg_.freeze_weights);
  }
  if (cfg_.audit_every > 0 && sweeps_done_ % cfg_.audit_every == 0) {
    const double err = audit_state(state_, data_, !cfg_.freeze_weights);
    if (err > kCacheAuditTol) {
      throw numeric_error("cache audit failed: max deviation " +
                          std::to_string(err));
    }
  }
}

ChainSamples Engine::run() {
  ChainSamples out;
  out.m = data_.m();
  out.q = data_.q();
  out.r = r_components(data_.q());
  out.p = data_.p();
  out.n_kept = cfg_.n_keep;
  out.seed = rng_.seed();
  out.stream_id = rng_.stream_id();
  out.beta = Matrix(cfg_.n_keep, out.p);
  out.alpha = Matrix(cfg_.n_keep, out.m);
  out.gamma = Matrix(cfg_.n_keep, out.m);
  out.scalars = Matrix(cfg_.n_keep, ChainSamples::kNumScalars);
  out.weights.assign(cfg_.n_keep * out.m * out.r, 0.0);

  adapting_ = cfg_.adapt;
  for (std::size_t s = 0; s < cfg_.n_burn; ++s) sweep();
  adapting_ = false;

  for (std::size_t d = 0; d < cfg_.n_keep; ++d) {
    for (std::size_t s = 0; s < cfg_.thin; ++s) sweep();
    for (std::size_t j = 0; j < out.p; ++j) out.beta(d, j) = state_.beta[j];
    for (std::size_t t = 0; t < out.m; ++t) {
      out.alpha(d, t) = state_.alpha[t];
      out.gamma(d, t) = static_cast<double>(state_.risk.gamma[t]);
      for (std::size_t c = 0; c < out.r; ++c) {
        out.weights[(d * out.m + t) * out.r + c] = state_.weights(c, t);
      }
    }
    out.scalars(d, ChainSamples::kA11) = state_.risk.A11;
    out.scalars(d, ChainSamples::kA21) = state_.risk.A21;
    out.scalars(d, ChainSamples::kA22) = state_.risk.A22;
    out.scalars(d, ChainSamples::kPhi1) = state_.risk.phi1;
    out.scalars(d, ChainSamples::kPhi2) = state_.risk.phi2;
    out.scalars(d, ChainSamples::kPhiLambda) = state_.phi_lambda;
  }
  out.acceptance = accept_;
  return out;
}

}  // namespace cwvsmix
