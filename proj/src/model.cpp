#include "cwvsmix/model.hpp"

#include <cmath>

#include "cwvsmix/errors.hpp"
#include "cwvsmix/kernels.hpp"
#include "cwvsmix/stats_math.hpp"

namespace cwvsmix {

double log_likelihood(const ChainState& state, const ExposureDataset& data) {
  const std::size_t n = data.n();
  if (state.x_beta.size() != n || state.g_alpha.size() != n) {
    throw input_error("log_likelihood: dimension mismatch");
  }
  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lin = state.x_beta[i] + state.g_alpha[i];
    ll += data.y[i] * lin - stats::log1pexp(lin);
  }
  return ll;
}

void refresh_caches(ChainState& state, const ExposureDataset& data,
                    bool weights_from_field) {
  const std::size_t n = data.n();
  const std::size_t m = data.m();
  const std::size_t q = data.q();
  const std::size_t r = r_components(q);

  for (std::size_t t = 0; t < m; ++t) {
    WeightVector w;
    if (weights_from_field) {
      w = transform_weights(
          std::span<const double>(state.field.lambda_star.col(t), r), q);
      for (std::size_t j = 0; j < q; ++j) state.weights(j, t) = w.main[j];
      for (std::size_t c = 0; c < w.inter.size(); ++c) {
        state.weights(q + c, t) = w.inter[c];
      }
    } else {
      w = weight_vector_from_column(
          std::span<const double>(state.weights.col(t), r), q);
    }
    design_column(w, data.z, t, state.g.col(t));
  }

  state.alpha.assign(m, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    state.risk.theta[t] = state.risk.A11 * state.risk.delta1[t];
    state.risk.eta[t] = state.risk.A21 * state.risk.delta1[t] +
                        state.risk.A22 * state.risk.delta2[t];
    state.alpha[t] = state.risk.theta[t] * state.risk.gamma[t];
    const double* gcol = state.g.col(t);
    double* gscol = state.g_star.col(t);
    const double gt = static_cast<double>(state.risk.gamma[t]);
    for (std::size_t i = 0; i < n; ++i) gscol[i] = gcol[i] * gt;
  }

  state.x_beta = linalg::matvec(data.x, state.beta);
  state.g_alpha.assign(n, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    if (state.alpha[t] != 0.0) {
      kernels::axpy(state.alpha[t], state.g.col(t), state.g_alpha.data(), n);
    }
  }
  state.zeta.resize(n);
  state.resid.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    state.zeta[i] = (data.y[i] - 0.5) / state.pg_latents[i];
    state.resid[i] = state.zeta[i] - state.x_beta[i] - state.g_alpha[i];
  }
}

double audit_state(const ChainState& state, const ExposureDataset& data,
                   bool weights_from_field) {
  ChainState fresh = state;
  refresh_caches(fresh, data, weights_from_field);
  double worst = 0.0;
  auto track = [&worst](double a, double b) {
    const double d = std::fabs(a - b);
    if (d > worst) worst = d;
  };
  for (std::size_t k = 0; k < state.g.size(); ++k) {
    track(state.g.data()[k], fresh.g.data()[k]);
    track(state.g_star.data()[k], fresh.g_star.data()[k]);
  }
  for (std::size_t k = 0; k < state.weights.size(); ++k) {
    track(state.weights.data()[k], fresh.weights.data()[k]);
  }
  for (std::size_t t = 0; t < state.alpha.size(); ++t) {
    track(state.alpha[t], fresh.alpha[t]);
    track(state.risk.theta[t], fresh.risk.theta[t]);
    track(state.risk.eta[t], fresh.risk.eta[t]);
  }
  for (std::size_t i = 0; i < state.resid.size(); ++i) {
    track(state.x_beta[i], fresh.x_beta[i]);
    track(state.g_alpha[i], fresh.g_alpha[i]);
    track(state.zeta[i], fresh.zeta[i]);
    track(state.resid[i], fresh.resid[i]);
  }
  return worst;
}

}  // namespace cwvsmix
