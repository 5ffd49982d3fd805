#include "cwvsmix/simstudy.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "cwvsmix/errors.hpp"
#include "cwvsmix/stats_math.hpp"

namespace cwvsmix {

const char* sub_setting_name(SubSetting s) {
  switch (s) {
    case SubSetting::A:
      return "A";
    case SubSetting::B:
      return "B";
    default:
      return "C";
  }
}

const char* method_name(Method m) {
  return m == Method::cwvsmix ? "cwvsmix" : "ew";
}

std::uint64_t dataset_stream_id(std::size_t replicate) {
  return (1ULL << 56) | static_cast<std::uint64_t>(replicate);
}

std::uint64_t chain_stream_id(Method method, std::size_t replicate) {
  const std::uint64_t k = method == Method::cwvsmix ? 0 : 1;
  return ((2ULL + k) << 56) | static_cast<std::uint64_t>(replicate);
}

void SimScenario::validate() const {
  if (setting < 1 || setting > 5) {
    throw input_error("scenario: setting must be in 1..5");
  }
  if (static_cast<std::size_t>(setting) > q) {
    throw input_error("scenario: setting exceeds pollutant count");
  }
  if (setting == 1 && sub == SubSetting::B) {
    throw input_error(
        "scenario: Setting 1 has no Sub-Setting B (a single non-zero weight "
        "cannot vary)");
  }
  if (n == 0 || m == 0 || q == 0) throw input_error("scenario: empty dims");
  if (window_len_min < 1 || window_len_min > window_len_max) {
    throw input_error("scenario: bad window length range");
  }
  if (!(interaction_prob >= 0.0 && interaction_prob <= 1.0)) {
    throw input_error("scenario: interaction_prob must be in [0, 1]");
  }
  if (source.kind == ExposureSource::Kind::resample &&
      source.profile_file.empty()) {
    throw input_error("scenario: resample source needs a profile file");
  }
}

namespace {

// Distinct pollutant subset of the given size, drawn by partial
// Fisher-Yates, returned sorted.
std::vector<std::size_t> draw_subset(std::size_t q, std::size_t size,
                                     RngStream& rng) {
  std::vector<std::size_t> pool(q);
  for (std::size_t i = 0; i < q; ++i) pool[i] = i;
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.uniform() * (q - i));
    std::swap(pool[i], pool[std::min(j, q - 1)]);
  }
  std::vector<std::size_t> out(pool.begin(), pool.begin() + size);
  std::sort(out.begin(), out.end());
  return out;
}

struct PeriodPattern {
  std::vector<std::size_t> mains;            // important pollutant indices
  std::vector<std::pair<std::size_t, std::size_t>> inters;  // active pairs
};

PeriodPattern draw_pattern(const SimScenario& sc, RngStream& rng) {
  PeriodPattern p;
  p.mains = draw_subset(sc.q, static_cast<std::size_t>(sc.setting), rng);
  for (std::size_t a = 0; a + 1 < p.mains.size(); ++a) {
    for (std::size_t b = a + 1; b < p.mains.size(); ++b) {
      if (rng.uniform() < sc.interaction_prob) {
        p.inters.emplace_back(p.mains[a], p.mains[b]);
      }
    }
  }
  return p;
}

// Dirichlet(1, ..., 1) weights over the active components of a pattern,
// written into one column of the truth matrix.
void fill_weights_column(const PeriodPattern& pat, const SimScenario& sc,
                         Matrix& weights, std::size_t t, RngStream& rng) {
  const std::size_t k = pat.mains.size() + pat.inters.size();
  const std::vector<double> alpha(k, 1.0);
  const std::vector<double> w = draw_dirichlet(alpha, rng);
  std::size_t idx = 0;
  for (std::size_t j : pat.mains) weights(j, t) = w[idx++];
  for (const auto& [j, kk] : pat.inters) {
    weights(interaction_index(j, kk, sc.q), t) = w[idx++];
  }
}

ExposureTensor synthetic_exposures(const SimScenario& sc, RngStream& rng) {
  const std::size_t n = sc.n, m = sc.m, q = sc.q;
  const double rho = sc.source.ar1;
  const double innov_sd = std::sqrt(1.0 - rho * rho);
  // Cross-pollutant factor: chol of the equicorrelation matrix.
  Matrix cross(q, q);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      cross(a, b) = (a == b) ? 1.0 : sc.source.cross_corr;
    }
  }
  const auto lq = linalg::chol_lower(cross);
  if (!lq) throw numeric_error("synthetic exposures: cross-correlation not PD");

  ExposureTensor z(n, m, q);
  Vector eps(q), mixed(q);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t a = 0; a < q; ++a) eps[a] = draw_std_normal(rng);
      for (std::size_t a = 0; a < q; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b <= a; ++b) s += (*lq)(a, b) * eps[b];
        mixed[a] = s;
      }
      for (std::size_t j = 0; j < q; ++j) {
        z.at(i, j, t) = (t == 0) ? mixed[j]
                                 : rho * z.at(i, j, t - 1) + innov_sd * mixed[j];
      }
    }
  }
  return z;
}

}  // namespace

std::pair<ExposureDataset, SimTruth> generate_dataset(
    const SimScenario& scenario, RngStream& rng,
    const ExposureTensor* profiles) {
  scenario.validate();
  const std::size_t n = scenario.n, m = scenario.m, q = scenario.q;
  const std::size_t r = r_components(q);

  ExposureDataset data;
  data.pollutant_names.reserve(q);
  for (std::size_t j = 0; j < q; ++j) {
    data.pollutant_names.push_back("p" + std::to_string(j + 1));
  }
  data.covariate_names = {"(intercept)"};
  data.x = Matrix(n, 1, 1.0);

  if (scenario.source.kind == ExposureSource::Kind::synthetic_ar1) {
    data.z = synthetic_exposures(scenario, rng);
  } else {
    if (profiles == nullptr) {
      throw input_error("generate_dataset: resample source needs profiles");
    }
    if (profiles->m != m || profiles->q != q || profiles->n == 0) {
      throw input_error("generate_dataset: profile dimensions do not match "
                        "the scenario");
    }
    data.z = ExposureTensor(n, m, q);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pick =
          static_cast<std::size_t>(rng.uniform() * profiles->n) % profiles->n;
      for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t j = 0; j < q; ++j) {
          data.z.at(i, j, t) = profiles->at(pick, j, t);
        }
      }
    }
  }
  data.scaling = iqr_standardize(data.z, data.pollutant_names);

  SimTruth truth;
  truth.critical.assign(m, 0);
  truth.weights = Matrix(r, m);
  truth.alpha.assign(m, 0.0);

  const std::size_t max_len = std::min<std::size_t>(scenario.window_len_max, m);
  const std::size_t min_len = std::min<std::size_t>(scenario.window_len_min, max_len);
  const std::size_t span = max_len - min_len + 1;
  truth.window_len =
      min_len + static_cast<std::size_t>(rng.uniform() * span) % span;
  const std::size_t starts = m - truth.window_len + 1;
  truth.window_start = static_cast<std::size_t>(rng.uniform() * starts) % starts;
  for (std::size_t t = truth.window_start;
       t < truth.window_start + truth.window_len; ++t) {
    truth.critical[t] = 1;
    truth.alpha[t] = scenario.effect_size;
  }

  // Weight composition per Sub-Setting:
  //   A: one pattern, one weight draw, copied to every critical period.
  //   B: one pattern, fresh weight draws per critical period.
  //   C: fresh pattern and weights per critical period (same #mains).
  if (scenario.sub == SubSetting::C) {
    for (std::size_t t = truth.window_start;
         t < truth.window_start + truth.window_len; ++t) {
      const PeriodPattern pat = draw_pattern(scenario, rng);
      fill_weights_column(pat, scenario, truth.weights, t, rng);
    }
  } else {
    const PeriodPattern pat = draw_pattern(scenario, rng);
    if (scenario.sub == SubSetting::A) {
      const std::size_t t0 = truth.window_start;
      fill_weights_column(pat, scenario, truth.weights, t0, rng);
      for (std::size_t t = t0 + 1; t < t0 + truth.window_len; ++t) {
        for (std::size_t c = 0; c < r; ++c) {
          truth.weights(c, t) = truth.weights(c, t0);
        }
      }
    } else {  // B
      for (std::size_t t = truth.window_start;
           t < truth.window_start + truth.window_len; ++t) {
        fill_weights_column(pat, scenario, truth.weights, t, rng);
      }
    }
  }

  // Outcomes from the logistic model with zero covariate contribution.
  data.y.assign(n, 0);
  std::vector<WeightVector> wv;
  wv.reserve(m);
  for (std::size_t t = 0; t < m; ++t) {
    wv.push_back(weight_vector_from_column(
        std::span<const double>(truth.weights.col(t), r), q));
  }
  Vector zrow(q);
  for (std::size_t i = 0; i < n; ++i) {
    double lin = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      if (truth.alpha[t] == 0.0) continue;
      for (std::size_t j = 0; j < q; ++j) zrow[j] = data.z.at(i, j, t);
      lin += truth.alpha[t] * mixture_exposure(wv[t], zrow);
    }
    const double p = 1.0 / (1.0 + std::exp(-lin));
    data.y[i] = rng.uniform() < p ? 1 : 0;
  }
  return {std::move(data), std::move(truth)};
}

double score_cw_accuracy(const SimTruth& truth,
                         const std::vector<WindowDecision>& decisions) {
  const std::size_t m = truth.critical.size();
  if (decisions.size() != m) {
    throw input_error("score_cw_accuracy: period count mismatch");
  }
  std::size_t hits = 0;
  for (std::size_t t = 0; t < m; ++t) {
    const bool in_est = decisions[t].verdict != Verdict::null;
    const bool in_truth = truth.critical[t] != 0;
    hits += (in_est == in_truth);
  }
  return static_cast<double>(hits) / static_cast<double>(m);
}

double score_amse_lambda(const SimTruth& truth, const WeightSelection& sel,
                         bool* used_unconditional) {
  const std::size_t m = truth.critical.size();
  const std::size_t r = sel.r;
  if (sel.m != m) throw input_error("score_amse_lambda: period mismatch");
  double se = 0.0;
  std::size_t terms = 0;
  bool flagged = false;
  for (std::size_t t = 0; t < m; ++t) {
    if (!truth.critical[t]) continue;
    if (sel.no_conditional_draws[t]) flagged = true;
    for (std::size_t c = 0; c < r; ++c) {
      const double e = truth.weights(c, t) - sel.conditional_mean(c, t);
      se += e * e;
      ++terms;
    }
  }
  if (used_unconditional) *used_unconditional = flagged;
  return terms ? se / static_cast<double>(terms) : 0.0;
}

double score_amse_exp_alpha(const SimTruth& truth, const ChainSamples& samples,
                            bool* used_unconditional) {
  const std::size_t m = truth.alpha.size();
  if (samples.m != m) throw input_error("score_amse_exp_alpha: period mismatch");
  double se = 0.0;
  bool flagged = false;
  for (std::size_t t = 0; t < m; ++t) {
    double sum = 0.0;
    std::size_t n_cond = 0;
    for (std::size_t k = 0; k < samples.n_kept; ++k) {
      if (samples.gamma(k, t) != 0.0) {
        sum += std::exp(samples.alpha(k, t));
        ++n_cond;
      }
    }
    double est;
    if (n_cond) {
      est = sum / static_cast<double>(n_cond);
    } else {
      flagged = true;
      double s = 0.0;
      for (std::size_t k = 0; k < samples.n_kept; ++k) {
        s += std::exp(samples.alpha(k, t));
      }
      est = samples.n_kept ? s / static_cast<double>(samples.n_kept) : 1.0;
    }
    const double e = std::exp(truth.alpha[t]) - est;
    se += e * e;
  }
  if (used_unconditional) *used_unconditional = flagged;
  return se / static_cast<double>(m);
}

SelectionAccuracy score_weight_selection(const SimTruth& truth,
                                         const WeightSelection& sel) {
  SelectionAccuracy acc;
  const std::size_t m = truth.critical.size();
  const std::size_t q = sel.q;
  std::size_t main_hits = 0, main_total = 0;
  std::size_t inter_hits = 0, inter_total = 0;
  for (std::size_t t = 0; t < m; ++t) {
    if (!truth.critical[t]) continue;
    for (std::size_t j = 0; j < q; ++j) {
      const bool est = sel.is_selected(j, t);
      const bool tru = truth.weights(j, t) > 0.0;
      main_hits += (est == tru);
      ++main_total;
    }
    for (std::size_t c = q; c < sel.r; ++c) {
      const bool est = sel.is_selected(c, t);
      const bool tru = truth.weights(c, t) > 0.0;
      inter_hits += (est == tru);
      ++inter_total;
    }
  }
  acc.main = main_total
                 ? static_cast<double>(main_hits) / static_cast<double>(main_total)
                 : 0.0;
  acc.has_interactions = inter_total > 0;
  acc.interaction =
      inter_total
          ? static_cast<double>(inter_hits) / static_cast<double>(inter_total)
          : 0.0;
  return acc;
}

ChainSamples run_ew_baseline(const ExposureDataset& data, const Priors& priors,
                             const SweepConfig& cfg, RngStream rng) {
  SweepConfig ew_cfg = cfg;
  ew_cfg.freeze_weights = true;
  Engine engine(data, priors, ew_cfg, std::move(rng));
  return engine.run();
}

namespace {

ReplicateResult score_one(const SimTruth& truth, const ChainSamples& samples,
                          double ci_level) {
  ReplicateResult r;
  const auto decisions = decide_windows(samples, ci_level);
  const auto sel = select_weights(samples);
  r.cw_accuracy = score_cw_accuracy(truth, decisions);
  bool flag1 = false, flag2 = false;
  r.amse_lambda = score_amse_lambda(truth, sel, &flag1);
  r.amse_exp_alpha = score_amse_exp_alpha(truth, samples, &flag2);
  r.amse_used_unconditional = flag1 || flag2;
  const SelectionAccuracy acc = score_weight_selection(truth, sel);
  r.main_accuracy = acc.main;
  r.interaction_accuracy = acc.interaction;
  r.has_interactions = acc.has_interactions;
  return r;
}

MetricSummary summarize_metric(const std::vector<double>& values) {
  MetricSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  s.mean = mean;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.se = sd / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

}  // namespace

StudyResult run_study(const SimScenario& scenario, std::size_t n_replicates,
                      const std::vector<Method>& methods, const Priors& priors,
                      const SweepConfig& cfg, std::uint64_t master_seed,
                      std::size_t workers, double ci_level,
                      const ExposureTensor* profiles) {
  scenario.validate();
  if (methods.empty()) throw input_error("run_study: no methods requested");

  StudyResult result;
  result.methods = methods;
  result.replicates.assign(n_replicates * methods.size(), ReplicateResult{});

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t rep = next.fetch_add(1);
      if (rep >= n_replicates) return;
      RngStream data_rng(master_seed, dataset_stream_id(rep));
      ExposureDataset data;
      SimTruth truth;
      bool data_ok = true;
      std::string data_err;
      try {
        std::tie(data, truth) = generate_dataset(scenario, data_rng, profiles);
      } catch (const std::exception& e) {
        data_ok = false;
        data_err = e.what();
      }
      for (std::size_t k = 0; k < methods.size(); ++k) {
        ReplicateResult& slot = result.replicates[rep * methods.size() + k];
        slot.replicate = rep;
        slot.method = methods[k];
        slot.dataset_stream = dataset_stream_id(rep);
        slot.chain_stream = chain_stream_id(methods[k], rep);
        if (!data_ok) {
          slot.failed = true;
          slot.error = data_err;
          continue;
        }
        try {
          RngStream chain_rng(master_seed, slot.chain_stream);
          ChainSamples samples;
          if (methods[k] == Method::ew) {
            samples = run_ew_baseline(data, priors, cfg, std::move(chain_rng));
          } else {
            Engine engine(data, priors, cfg, std::move(chain_rng));
            samples = engine.run();
          }
          ReplicateResult scored = score_one(truth, samples, ci_level);
          scored.replicate = rep;
          scored.method = methods[k];
          scored.dataset_stream = slot.dataset_stream;
          scored.chain_stream = slot.chain_stream;
          slot = scored;
        } catch (const std::exception& e) {
          slot.failed = true;
          slot.error = e.what();
        }
      }
    }
  };

  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min(workers, n_replicates));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t k = 0; k < methods.size(); ++k) {
    std::vector<double> cw, al, ae, ma, ia;
    for (std::size_t rep = 0; rep < n_replicates; ++rep) {
      const ReplicateResult& r = result.replicates[rep * methods.size() + k];
      if (r.failed) continue;
      cw.push_back(r.cw_accuracy);
      al.push_back(r.amse_lambda);
      ae.push_back(r.amse_exp_alpha);
      ma.push_back(r.main_accuracy);
      if (r.has_interactions) ia.push_back(r.interaction_accuracy);
    }
    result.cw_accuracy.push_back(summarize_metric(cw));
    result.amse_lambda.push_back(summarize_metric(al));
    result.amse_exp_alpha.push_back(summarize_metric(ae));
    result.main_accuracy.push_back(summarize_metric(ma));
    result.interaction_accuracy.push_back(summarize_metric(ia));
  }
  return result;
}

}  // namespace cwvsmix
