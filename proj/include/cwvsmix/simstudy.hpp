#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cwvsmix/data.hpp"
#include "cwvsmix/engine.hpp"
#include "cwvsmix/inference.hpp"

namespace cwvsmix {

enum class SubSetting { A, B, C };
enum class Method { cwvsmix, ew };

const char* sub_setting_name(SubSetting s);
const char* method_name(Method m);

struct ExposureSource {
  enum class Kind { synthetic_ar1, resample };
  Kind kind = Kind::synthetic_ar1;
  double ar1 = 0.9;         // lag-1 correlation across periods
  double cross_corr = 0.6;  // pairwise cross-pollutant correlation
  std::string profile_file;  // resample mode: CSV of exposure profiles
};

struct SimScenario {
  int setting = 1;  // number of important pollutants, 1..5
  SubSetting sub = SubSetting::A;
  std::size_t n = 2534;
  std::size_t m = 20;
  std::size_t q = 5;
  double effect_size = 0.23;
  std::size_t window_len_min = 1;
  std::size_t window_len_max = 7;
  double interaction_prob = 0.5;
  ExposureSource source;

  void validate() const;  // throws input_error (e.g. Setting 1 x Sub-Setting B)
};

struct SimTruth {
  std::vector<std::uint8_t> critical;  // length m
  Matrix weights;                      // r x m, true per-period weights
  Vector alpha;                        // length m
  std::size_t window_start = 0;        // 0-based
  std::size_t window_len = 0;
};

// profiles backs the resample exposure source: subjects are drawn with
// replacement from its rows (full m x q profiles, preserving temporal and
// cross-pollutant covariance).  Required for resample mode, ignored for
// synthetic mode.
std::pair<ExposureDataset, SimTruth> generate_dataset(
    const SimScenario& scenario, RngStream& rng,
    const ExposureTensor* profiles = nullptr);

// Fraction of periods whose estimated critical-set membership matches truth.
double score_cw_accuracy(const SimTruth& truth,
                         const std::vector<WindowDecision>& decisions);

// Mean squared error of the conditional posterior-mean weight estimator over
// true critical periods and all components.
double score_amse_lambda(const SimTruth& truth, const WeightSelection& sel,
                         bool* used_unconditional = nullptr);

// Mean squared error of the conditional posterior mean of exp{alpha(t)} over
// all periods.
double score_amse_exp_alpha(const SimTruth& truth, const ChainSamples& samples,
                            bool* used_unconditional = nullptr);

struct SelectionAccuracy {
  double main = 0.0;
  bool has_interactions = false;
  double interaction = 0.0;
};

// Selected-vs-true-nonzero classification accuracy over true critical
// periods, mains and interactions separately.
SelectionAccuracy score_weight_selection(const SimTruth& truth,
                                         const WeightSelection& sel);

// CWVS on the equally weighted exposure: the engine with lambda* updates
// disabled and every weight frozen at 2/(q(q+1)).
ChainSamples run_ew_baseline(const ExposureDataset& data, const Priors& priors,
                             const SweepConfig& cfg, RngStream rng);

struct ReplicateResult {
  std::size_t replicate = 0;
  Method method = Method::cwvsmix;
  std::uint64_t dataset_stream = 0;
  std::uint64_t chain_stream = 0;
  bool failed = false;
  std::string error;
  bool amse_used_unconditional = false;
  double cw_accuracy = 0.0;
  double amse_lambda = 0.0;
  double amse_exp_alpha = 0.0;
  double main_accuracy = 0.0;
  double interaction_accuracy = 0.0;
  bool has_interactions = false;
};

struct MetricSummary {
  double mean = 0.0;
  std::optional<double> se;  // absent with a single replicate
  std::size_t n = 0;
};

struct StudyResult {
  std::vector<ReplicateResult> replicates;  // replicate-major, method-minor
  // Indexed by method in the order passed to run_study.
  std::vector<Method> methods;
  std::vector<MetricSummary> cw_accuracy;
  std::vector<MetricSummary> amse_lambda;
  std::vector<MetricSummary> amse_exp_alpha;
  std::vector<MetricSummary> main_accuracy;
  std::vector<MetricSummary> interaction_accuracy;
};

// Runs n_replicates independent datasets, fits each requested method to each
// dataset, and scores them.  Replicates fan out over a worker pool; every
// replicate/method pair derives its own RngStream from master_seed, so the
// result is byte-identical regardless of scheduling.  A failed replicate is
// flagged and skipped in the summaries rather than aborting the study.
StudyResult run_study(const SimScenario& scenario, std::size_t n_replicates,
                      const std::vector<Method>& methods,
                      const Priors& priors, const SweepConfig& cfg,
                      std::uint64_t master_seed, std::size_t workers,
                      double ci_level = 0.90,
                      const ExposureTensor* profiles = nullptr);

// Stream-id scheme (documented for reproducibility):
//   dataset for replicate j:  (1 << 56) | j
//   chain for method k, rep j: ((2 + k) << 56) | j
std::uint64_t dataset_stream_id(std::size_t replicate);
std::uint64_t chain_stream_id(Method method, std::size_t replicate);

}  // namespace cwvsmix
