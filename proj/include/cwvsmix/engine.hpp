#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cwvsmix/covariance.hpp"
#include "cwvsmix/model.hpp"
#include "cwvsmix/rng.hpp"
#include "cwvsmix/samplers.hpp"

namespace cwvsmix {

struct SweepConfig {
  std::size_t n_burn = 10000;
  std::size_t n_keep = 1000;
  std::size_t thin = 10;

  // Random-walk Metropolis step sizes (initial; Robbins-Monro adapted toward
  // target_accept during burn-in only, frozen afterward).
  double initial_step = 0.5;
  double target_accept = 0.35;
  bool adapt = true;

  // Cache hygiene: full rebuild cadence, and optional audit cadence which
  // throws if incremental caches drift beyond 1e-9 from a scratch rebuild.
  std::size_t refresh_every = 500;
  std::size_t audit_every = 0;

  // Equal-weight mode: lambda* updates disabled, every weight frozen at
  // 2/(q(q+1)).
  bool freeze_weights = false;

  // Prior-recovery mode: gamma fixed at zero (update skipped) and gamma*
  // sampled unconstrained from N(eta, 1); the chain then targets the joint
  // prior of the risk/weight machinery.
  bool force_gamma_zero = false;
};

struct AcceptanceCounter {
  std::size_t proposals = 0;
  std::size_t accepts = 0;
  double rate() const {
    return proposals ? static_cast<double>(accepts) / proposals : 0.0;
  }
};

struct AcceptanceReport {
  AcceptanceCounter a11, a21, a22, psi1, psi2, psi_lambda;
  std::vector<AcceptanceCounter> lambda_block;  // per exposure period
};

// Thinned posterior draws plus the seed manifest needed to reproduce them.
class ChainSamples {
 public:
  std::size_t n_kept = 0, m = 0, q = 0, r = 0, p = 0;
  std::uint64_t seed = 0, stream_id = 0;

  Matrix beta;     // n_kept x p
  Matrix alpha;    // n_kept x m
  Matrix gamma;    // n_kept x m (0/1)
  Matrix scalars;  // n_kept x 6: A11, A21, A22, phi1, phi2, phi_lambda
  std::vector<double> weights;  // (draw * m + t) * r + c

  enum Scalar { kA11 = 0, kA21, kA22, kPhi1, kPhi2, kPhiLambda, kNumScalars };

  double weight(std::size_t draw, std::size_t t, std::size_t c) const {
    return weights[(draw * m + t) * r + c];
  }

  AcceptanceReport acceptance;
};

// Gaussian full conditional in precision form.
struct GaussianConditional {
  Vector mean;
  Matrix precision;
  Matrix prec_chol;
};

// One chain: owns its state and RngStream; strictly sequential.  Independent
// chains/replicates run concurrently by construction, each with its own
// Engine.  The per-sweep update order is fixed so caches are always
// refreshed before their dependents:
//   w -> beta -> lambda* -> phi_lambda -> delta1 -> A11 -> gamma -> gamma*
//     -> delta2 -> A21 -> A22 -> phi1 -> phi2
class Engine {
 public:
  Engine(const ExposureDataset& data, const Priors& priors,
         const SweepConfig& cfg, RngStream rng);

  ChainSamples run();

  void sweep();

  // Individual Gibbs/Metropolis blocks (public so the joint-distribution and
  // oracle tests can drive them directly).
  void update_pg_latents();
  void update_beta();
  void update_lambda_star();
  void update_phi_lambda();
  void update_delta1();
  void update_a11();
  void update_gamma();
  void update_gamma_star();
  void update_delta2();
  void update_a21();
  void update_a22();
  void update_phi1();
  void update_phi2();

  // Full conditionals / log targets, evaluated on the current state.  These
  // are the exact quantities the updates draw from, exposed for equivalence
  // testing against a dense oracle.
  GaussianConditional beta_conditional() const;
  GaussianConditional delta1_conditional() const;
  GaussianConditional delta2_conditional() const;
  double gamma_inclusion_prob(std::size_t t) const;
  double log_target_a21(double value) const;
  double log_target_ln_a11(double psi) const;
  double log_target_ln_a22(double psi) const;
  double log_target_ln_phi(int which, double psi) const;  // which: 1 or 2
  double log_target_ln_phi_lambda(double psi) const;
  // log target(candidate block at period t) - log target(current block).
  double lambda_block_log_ratio(std::size_t t,
                                std::span<const double> candidate) const;

  ChainState& state() { return state_; }
  const ChainState& state() const { return state_; }
  const ExposureDataset& data() const { return data_; }
  const AcceptanceReport& acceptance() const { return accept_; }
  RngStream& rng() { return rng_; }

  // Rebuild every cache from the primary parameters (also call after
  // mutating state() externally).
  void rebuild_caches();

  // Refresh zeta/resid after the owner changed data outcomes in place
  // (used by the joint-distribution simulator).
  void notify_outcomes_changed();

  static constexpr double kCacheAuditTol = 1e-9;

 private:
  const ExposureDataset& data_;
  Priors priors_;
  SweepConfig cfg_;
  ChainState state_;
  RngStream rng_;

  ExpCorrMatrix corr1_, corr2_, corr_lambda_;

  // Adaptive step sizes (log scale) and proposal counts per block.
  struct StepState {
    double ln_step;
    std::size_t n = 0;
  };
  StepState step_a11_, step_a21_, step_a22_, step_psi1_, step_psi2_,
      step_psi_lambda_;
  std::vector<StepState> step_lambda_;
  bool adapting_ = false;
  AcceptanceReport accept_;

  std::size_t sweeps_done_ = 0;

  void init_state();
  void refresh_g_alpha_and_resid();
  void refresh_eta();
  void refresh_theta_alpha();
  void adapt(StepState& step, bool accepted);
  Vector draw_from_conditional(const GaussianConditional& cond);
  Matrix chol_with_jitter(Matrix m, const char* what) const;
  Vector zeta_minus_xbeta() const;
  Vector gstar_delta1() const;
  double frozen_weight() const;
};

}  // namespace cwvsmix
