#include "cwvsmix/inference.hpp"

#include <algorithm>
#include <cmath>

#include "cwvsmix/data.hpp"
#include "cwvsmix/errors.hpp"

namespace cwvsmix {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::harmful:
      return "harmful";
    case Verdict::protective:
      return "protective";
    default:
      return "null";
  }
}

double draw_quantile(std::span<const double> draws, double p) {
  return quantile_type7(std::vector<double>(draws.begin(), draws.end()), p);
}

std::vector<WindowDecision> decide_windows(const ChainSamples& samples,
                                           double ci_level,
                                           double pip_threshold) {
  std::vector<WindowDecision> out(samples.m);
  const double tail = 0.5 * (1.0 - ci_level);
  std::vector<double> cond;
  for (std::size_t t = 0; t < samples.m; ++t) {
    WindowDecision& d = out[t];
    d.period = t + 1;
    cond.clear();
    double pip = 0.0;
    for (std::size_t k = 0; k < samples.n_kept; ++k) {
      if (samples.gamma(k, t) != 0.0) {
        pip += 1.0;
        cond.push_back(std::exp(samples.alpha(k, t)));
      }
    }
    d.pip = samples.n_kept ? pip / static_cast<double>(samples.n_kept) : 0.0;
    d.n_conditional_draws = cond.size();
    if (cond.empty()) {
      // PIP is 0 here, so the verdict is null regardless; flag it rather
      // than erroring.
      d.no_conditional_draws = true;
      d.verdict = Verdict::null;
      continue;
    }
    double s = 0.0;
    for (double v : cond) s += v;
    d.or_mean = s / static_cast<double>(cond.size());
    d.ci_low = draw_quantile(cond, tail);
    d.ci_high = draw_quantile(cond, 1.0 - tail);
    if (d.pip > pip_threshold && d.ci_low > 1.0) {
      d.verdict = Verdict::harmful;
    } else if (d.pip > pip_threshold && d.ci_high < 1.0) {
      d.verdict = Verdict::protective;
    } else {
      d.verdict = Verdict::null;
    }
  }
  return out;
}

WeightSelection select_weights(const ChainSamples& samples,
                               double main_threshold,
                               double interaction_threshold) {
  WeightSelection sel;
  sel.m = samples.m;
  sel.q = samples.q;
  sel.r = samples.r;
  sel.inclusion_prob = Matrix(samples.r, samples.m);
  sel.conditional_mean = Matrix(samples.r, samples.m);
  sel.selected.assign(samples.r * samples.m, 0);
  sel.no_conditional_draws.assign(samples.m, 0);

  for (std::size_t t = 0; t < samples.m; ++t) {
    std::size_t n_cond = 0;
    for (std::size_t k = 0; k < samples.n_kept; ++k) {
      const bool active = samples.gamma(k, t) != 0.0;
      n_cond += active;
      for (std::size_t c = 0; c < samples.r; ++c) {
        const double w = samples.weight(k, t, c);
        if (w > 0.0) sel.inclusion_prob(c, t) += 1.0;
        if (active) sel.conditional_mean(c, t) += w;
      }
    }
    if (samples.n_kept) {
      for (std::size_t c = 0; c < samples.r; ++c) {
        sel.inclusion_prob(c, t) /= static_cast<double>(samples.n_kept);
      }
    }
    if (n_cond) {
      for (std::size_t c = 0; c < samples.r; ++c) {
        sel.conditional_mean(c, t) /= static_cast<double>(n_cond);
      }
    } else {
      // Fall back to the unconditional mean and flag the period.
      sel.no_conditional_draws[t] = 1;
      for (std::size_t c = 0; c < samples.r; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < samples.n_kept; ++k) {
          s += samples.weight(k, t, c);
        }
        sel.conditional_mean(c, t) =
            samples.n_kept ? s / static_cast<double>(samples.n_kept) : 0.0;
      }
    }

    for (std::size_t j = 0; j < samples.q; ++j) {
      sel.selected[t * samples.r + j] =
          sel.inclusion_prob(j, t) > main_threshold ? 1 : 0;
    }
    std::size_t idx = 0;
    for (std::size_t j = 0; j + 1 < samples.q; ++j) {
      for (std::size_t k = j + 1; k < samples.q; ++k, ++idx) {
        const std::size_t c = samples.q + idx;
        const bool parents = sel.selected[t * samples.r + j] &&
                             sel.selected[t * samples.r + k];
        sel.selected[t * samples.r + c] =
            (parents && sel.inclusion_prob(c, t) > interaction_threshold) ? 1
                                                                          : 0;
      }
    }
  }
  return sel;
}

double pollutant_effect(const WeightVector& w, double alpha_t,
                        std::span<const double> z, std::size_t j) {
  const std::size_t q = w.q();
  if (z.size() != q || j >= q) {
    throw input_error("pollutant_effect: dimension mismatch");
  }
  double loading = w.main[j];
  for (std::size_t k = 0; k < j; ++k) {
    loading += w.inter[interaction_index(k, j, q) - q] * z[k];
  }
  for (std::size_t k = j + 1; k < q; ++k) {
    loading += w.inter[interaction_index(j, k, q) - q] * z[k];
  }
  return loading * alpha_t;
}

double all_pollutant_effect(const WeightVector& w, double alpha_t,
                            std::span<const double> z) {
  const std::size_t q = w.q();
  if (z.size() != q) {
    throw input_error("all_pollutant_effect: dimension mismatch");
  }
  double loading = 1.0;
  std::size_t idx = 0;
  for (std::size_t j = 0; j + 1 < q; ++j) {
    for (std::size_t k = j + 1; k < q; ++k, ++idx) {
      loading += w.inter[idx] * (z[j] + z[k]);
    }
  }
  return loading * alpha_t;
}

double spectrum0(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw input_error("spectrum0: need at least 2 points");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t lags = std::max<std::size_t>(
      1, static_cast<std::size_t>(0.04 * static_cast<double>(n)));
  double gamma0 = 0.0;
  for (double v : x) gamma0 += (v - mean) * (v - mean);
  gamma0 /= static_cast<double>(n);
  // numerically constant chains only accumulate mean-rounding dust
  if (!(gamma0 > 1e-24 * (1.0 + mean * mean))) {
    throw input_error("spectrum0: zero variance");
  }

  constexpr double kPi = 3.14159265358979323846;
  double s = gamma0;
  for (std::size_t k = 1; k <= lags && k < n; ++k) {
    double g = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) {
      g += (x[i] - mean) * (x[i + k] - mean);
    }
    g /= static_cast<double>(n);
    const double taper =
        0.5 * (1.0 + std::cos(kPi * static_cast<double>(k) /
                              static_cast<double>(lags + 1)));
    s += 2.0 * taper * g;
  }
  return std::max(s, 1e-12 * gamma0);
}

double geweke_z(std::span<const double> chain, double frac_a, double frac_b) {
  const std::size_t n = chain.size();
  if (n < 100) throw input_error("geweke_z: chain too short");
  const std::size_t na =
      static_cast<std::size_t>(frac_a * static_cast<double>(n));
  const std::size_t nb =
      static_cast<std::size_t>(frac_b * static_cast<double>(n));
  if (na < 2 || nb < 2 || na + nb > n) {
    throw input_error("geweke_z: invalid segment fractions");
  }
  const std::span<const double> a = chain.subspan(0, na);
  const std::span<const double> b = chain.subspan(n - nb, nb);
  double mean_a = 0.0, mean_b = 0.0;
  for (double v : a) mean_a += v;
  for (double v : b) mean_b += v;
  mean_a /= static_cast<double>(na);
  mean_b /= static_cast<double>(nb);
  const double var =
      spectrum0(a) / static_cast<double>(na) +
      spectrum0(b) / static_cast<double>(nb);
  return (mean_a - mean_b) / std::sqrt(var);
}

ScalarSummary summarize_scalar(const std::string& name,
                               std::span<const double> draws) {
  ScalarSummary s;
  s.name = name;
  const std::size_t n = draws.size();
  if (n == 0) return s;
  double mean = 0.0;
  for (double v : draws) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : draws) ss += (v - mean) * (v - mean);
  s.mean = mean;
  s.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  s.q025 = draw_quantile(draws, 0.025);
  s.q25 = draw_quantile(draws, 0.25);
  s.q50 = draw_quantile(draws, 0.50);
  s.q75 = draw_quantile(draws, 0.75);
  s.q975 = draw_quantile(draws, 0.975);
  try {
    s.geweke = geweke_z(draws);
    s.geweke_ok = true;
  } catch (const input_error&) {
    s.geweke = 0.0;
    s.geweke_ok = false;
  }
  return s;
}

}  // namespace cwvsmix
