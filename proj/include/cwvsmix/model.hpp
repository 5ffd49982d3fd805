#pragma once

#include <vector>

#include "cwvsmix/data.hpp"
#include "cwvsmix/weights.hpp"

namespace cwvsmix {

// The CWVS risk machinery: alpha(t) = theta(t) gamma(t), with
// theta = A11 delta1 and eta = A21 delta1 + A22 delta2 (linear model of
// coregionalization over two independent exponential-correlation processes).
struct RiskProcessState {
  Vector theta;       // m
  std::vector<int> gamma;  // m, 0/1
  Vector gamma_star;  // m, latent probit field; sign matches gamma
  Vector eta;         // m
  Vector delta1;      // m
  Vector delta2;      // m
  double A11 = 1.0;
  double A21 = 0.0;
  double A22 = 1.0;
  double phi1 = 1.0;
  double phi2 = 1.0;
};

// One full parameter configuration plus the per-sweep caches the updates
// maintain incrementally.  Invariants (checked by audit_state):
//   g       = weighted_design_matrix(field, Z)
//   g_star  column t = g column t * gamma(t)
//   alpha   = theta * gamma
//   g_alpha = g * alpha,  x_beta = X beta
//   zeta_i  = (y_i - 0.5) / w_i,  resid = zeta - x_beta - g_alpha
struct ChainState {
  Vector beta;              // p
  LatentWeightField field;  // lambda* (r x m)
  Matrix weights;           // r x m, transformed weights per period
  double phi_lambda = 1.0;
  RiskProcessState risk;
  Vector pg_latents;  // n, omega diagonal
  Vector zeta;        // n
  Matrix g;           // n x m
  Matrix g_star;      // n x m
  Vector alpha;       // m
  Vector x_beta;      // n
  Vector g_alpha;     // n
  Vector resid;       // n
};

// Bernoulli-logit log likelihood of Eq-style linear predictor
// x_beta + g_alpha, computed overflow-safely.
double log_likelihood(const ChainState& state, const ExposureDataset& data);

// Rebuilds every cache from (beta, field/weights, risk, pg_latents) and
// returns the max abs deviation from the stored caches.  Used as the
// periodic cache audit.  weights_from_field=false leaves the stored weight
// matrix as the authority (equal-weight mode, where lambda* is unused).
double audit_state(const ChainState& state, const ExposureDataset& data,
                   bool weights_from_field = true);

// Recomputes all caches in place from the primary parameters.
void refresh_caches(ChainState& state, const ExposureDataset& data,
                    bool weights_from_field = true);

}  // namespace cwvsmix
