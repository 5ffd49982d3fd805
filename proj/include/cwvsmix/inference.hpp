#pragma once

#include <span>
#include <string>
#include <vector>

#include "cwvsmix/engine.hpp"
#include "cwvsmix/weights.hpp"

namespace cwvsmix {

enum class Verdict { null, harmful, protective };

const char* verdict_name(Verdict v);

struct WindowDecision {
  std::size_t period = 0;  // 1-based
  double pip = 0.0;        // posterior mean of gamma(t)
  // Conditional-on-inclusion summaries of exp{alpha(t)}.
  double or_mean = 1.0;
  double ci_low = 1.0;
  double ci_high = 1.0;
  std::size_t n_conditional_draws = 0;
  bool no_conditional_draws = false;
  Verdict verdict = Verdict::null;
};

// Critical-window rule: period t is flagged iff PIP(t) > pip_threshold
// (strict) and the conditional quantile credible interval for exp{alpha(t)}
// lies entirely above one (harmful) or entirely below one (protective).
std::vector<WindowDecision> decide_windows(const ChainSamples& samples,
                                           double ci_level = 0.90,
                                           double pip_threshold = 0.50);

struct WeightSelection {
  std::size_t m = 0, q = 0, r = 0;
  Matrix inclusion_prob;        // r x m: fraction of draws with weight > 0
  Matrix conditional_mean;      // r x m: mean weight given gamma(t) = 1
  std::vector<std::uint8_t> selected;  // r x m, column-major
  std::vector<std::uint8_t> no_conditional_draws;  // per period

  bool is_selected(std::size_t c, std::size_t t) const {
    return selected[t * r + c] != 0;
  }
};

// Mains selected when inclusion probability > main_threshold; interactions
// when > interaction_threshold AND both parent mains are selected (strict
// inequalities; decision-level strong hierarchy).
WeightSelection select_weights(const ChainSamples& samples,
                               double main_threshold = 0.50,
                               double interaction_threshold = 0.125);

// Log-odds change for a one-unit increase in pollutant j at period t,
// holding the others at baseline z.
double pollutant_effect(const WeightVector& w, double alpha_t,
                        std::span<const double> z, std::size_t j);

// Log-odds change when every pollutant rises one unit from baseline z.
double all_pollutant_effect(const WeightVector& w, double alpha_t,
                            std::span<const double> z);

// Spectral density at frequency zero: lag-window estimator with a
// Tukey-Hanning taper over the first 4% of the segment length.
double spectrum0(std::span<const double> x);

// Geweke convergence z-score comparing the first frac_a to the last frac_b
// of the chain, with spectral variance estimates.  Chain must have at least
// 100 points; a (numerically) constant chain is an error.
double geweke_z(std::span<const double> chain, double frac_a = 0.1,
                double frac_b = 0.5);

// Type-7 quantile over a draws span (copies).
double draw_quantile(std::span<const double> draws, double p);

struct ScalarSummary {
  std::string name;
  double mean = 0.0, sd = 0.0;
  double q025 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q975 = 0.0;
  double geweke = 0.0;
  bool geweke_ok = false;
};

ScalarSummary summarize_scalar(const std::string& name,
                               std::span<const double> draws);

}  // namespace cwvsmix
