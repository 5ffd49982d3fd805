#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cwvsmix/errors.hpp"
#include "cwvsmix/inference.hpp"
#include "cwvsmix/samplers.hpp"

using namespace cwvsmix;

namespace {

// Builds a one-period ChainSamples with the requested inclusion pattern and
// conditional alpha draws.
ChainSamples synth_samples(std::size_t n_kept, std::size_t n_active,
                           double or_low, double or_high) {
  ChainSamples s;
  s.n_kept = n_kept;
  s.m = 1;
  s.q = 1;
  s.r = 1;
  s.p = 1;
  s.beta = Matrix(n_kept, 1);
  s.alpha = Matrix(n_kept, 1);
  s.gamma = Matrix(n_kept, 1);
  s.scalars = Matrix(n_kept, ChainSamples::kNumScalars);
  s.weights.assign(n_kept, 1.0);
  for (std::size_t k = 0; k < n_active; ++k) {
    s.gamma(k, 0) = 1.0;
    // conditional draws spread evenly across [or_low, or_high] on the OR scale
    const double frac = n_active == 1
                            ? 0.5
                            : static_cast<double>(k) / (n_active - 1);
    s.alpha(k, 0) = std::log(or_low + frac * (or_high - or_low));
  }
  return s;
}

}  // namespace

TEST_CASE("window decision rule") {
  SUBCASE("PIP above threshold with CI above one is harmful") {
    const auto s = synth_samples(1000, 600, 1.02, 1.15);
    const auto d = decide_windows(s, 0.90);
    REQUIRE(d.size() == 1);
    CHECK(d[0].pip == doctest::Approx(0.6));
    CHECK(d[0].ci_low > 1.0);
    CHECK(d[0].verdict == Verdict::harmful);
  }
  SUBCASE("CI straddling one is null even with high PIP") {
    const auto s = synth_samples(1000, 600, 0.95, 1.10);
    const auto d = decide_windows(s, 0.90);
    CHECK(d[0].verdict == Verdict::null);
  }
  SUBCASE("low PIP is null even with CI above one") {
    const auto s = synth_samples(1000, 400, 1.05, 1.20);
    const auto d = decide_windows(s, 0.90);
    CHECK(d[0].pip == doctest::Approx(0.4));
    CHECK(d[0].verdict == Verdict::null);
  }
  SUBCASE("CI below one is protective") {
    const auto s = synth_samples(1000, 700, 0.80, 0.93);
    const auto d = decide_windows(s, 0.90);
    CHECK(d[0].verdict == Verdict::protective);
  }
  SUBCASE("no conditional draws flags the period") {
    const auto s = synth_samples(1000, 0, 1.0, 1.0);
    const auto d = decide_windows(s, 0.90);
    CHECK(d[0].verdict == Verdict::null);
    CHECK(d[0].no_conditional_draws);
  }
  SUBCASE("PIP exactly at the threshold is excluded (strict inequality)") {
    const auto s = synth_samples(1000, 500, 1.05, 1.20);
    const auto d = decide_windows(s, 0.90, 0.50);
    CHECK(d[0].pip == doctest::Approx(0.5));
    CHECK(d[0].verdict == Verdict::null);
  }
}

TEST_CASE("verdicts agree with the log-scale formulation of the rule") {
  // monotone-transform invariance: compare against deciding on alpha vs 0
  RngStream rng(2, 2);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n_active =
        static_cast<std::size_t>(rng.uniform() * 999) + 1;
    ChainSamples s = synth_samples(1000, n_active, 1.0, 1.0);
    for (std::size_t k = 0; k < n_active; ++k) {
      s.alpha(k, 0) = 0.3 * draw_std_normal(rng) + 0.05;
    }
    const auto d = decide_windows(s, 0.90);
    std::vector<double> cond;
    for (std::size_t k = 0; k < n_active; ++k) cond.push_back(s.alpha(k, 0));
    const double lo = draw_quantile(cond, 0.05);
    const double hi = draw_quantile(cond, 0.95);
    Verdict want = Verdict::null;
    if (d[0].pip > 0.5 && lo > 0.0) want = Verdict::harmful;
    if (d[0].pip > 0.5 && hi < 0.0) want = Verdict::protective;
    CHECK(d[0].verdict == want);
  }
}

namespace {

// Samples with m=1, q=2 (r=3): weight columns built from per-draw flags.
ChainSamples weight_samples(std::size_t n_kept, double p_main1, double p_main2,
                            double p_inter) {
  ChainSamples s;
  s.n_kept = n_kept;
  s.m = 1;
  s.q = 2;
  s.r = 3;
  s.p = 1;
  s.beta = Matrix(n_kept, 1);
  s.alpha = Matrix(n_kept, 1);
  s.gamma = Matrix(n_kept, 1, 1.0);
  s.scalars = Matrix(n_kept, ChainSamples::kNumScalars);
  s.weights.assign(n_kept * 3, 0.0);
  for (std::size_t k = 0; k < n_kept; ++k) {
    const bool m1 = k < p_main1 * n_kept;
    const bool m2 = k < p_main2 * n_kept;
    const bool it = k < p_inter * n_kept;
    double w1 = m1 ? 0.5 : 0.0, w2 = m2 ? 0.3 : 0.0, wi = it ? 0.2 : 0.0;
    const double tot = w1 + w2 + wi;
    if (tot > 0) {
      w1 /= tot;
      w2 /= tot;
      wi /= tot;
    }
    s.weights[k * 3 + 0] = w1;
    s.weights[k * 3 + 1] = w2;
    s.weights[k * 3 + 2] = wi;
  }
  return s;
}

}  // namespace

TEST_CASE("weight selection thresholds and hierarchy") {
  SUBCASE("both mains and the interaction clear their thresholds") {
    const auto sel = select_weights(weight_samples(10000, 0.61, 0.57, 0.14));
    CHECK(sel.is_selected(0, 0));
    CHECK(sel.is_selected(1, 0));
    CHECK(sel.is_selected(2, 0));
  }
  SUBCASE("hierarchy blocks an interaction whose parent main is out") {
    const auto sel = select_weights(weight_samples(10000, 0.61, 0.33, 0.40));
    CHECK(sel.is_selected(0, 0));
    CHECK_FALSE(sel.is_selected(1, 0));
    CHECK_FALSE(sel.is_selected(2, 0));
  }
  SUBCASE("exactly 0.125 does not select (strict inequality)") {
    const auto sel = select_weights(weight_samples(1000, 0.80, 0.80, 0.125));
    CHECK(sel.inclusion_prob(2, 0) == doctest::Approx(0.125));
    CHECK_FALSE(sel.is_selected(2, 0));
  }
  SUBCASE("selection output always satisfies decision-level hierarchy") {
    RngStream rng(5, 5);
    for (int rep = 0; rep < 30; ++rep) {
      const auto sel = select_weights(weight_samples(
          400, rng.uniform(), rng.uniform(), rng.uniform()));
      if (sel.is_selected(2, 0)) {
        CHECK(sel.is_selected(0, 0));
        CHECK(sel.is_selected(1, 0));
      }
    }
  }
}

TEST_CASE("pollutant effect formulas") {
  SUBCASE("no active interactions collapses to weight times alpha") {
    const auto w = transform_weights(Vector{0.75, 0.25, -1.0}, 2);
    CHECK(pollutant_effect(w, 0.4, Vector{0.0, 0.0}, 0) ==
          doctest::Approx(w.main[0] * 0.4).epsilon(1e-12));
  }
  SUBCASE("all-pollutant effect at zero baseline is alpha exactly") {
    const auto w = transform_weights(Vector{1.0, 1.0, 2.0}, 2);
    CHECK(all_pollutant_effect(w, 0.23, Vector{0.0, 0.0}) ==
          doctest::Approx(0.23).epsilon(1e-15));
  }
  SUBCASE("hand-computed interacting case") {
    // weights: main .25/.25, inter .5; z = (1,1): (1 + .5*2)*.2 = .4
    const auto w = transform_weights(Vector{1.0, 1.0, 2.0}, 2);
    CHECK(all_pollutant_effect(w, 0.2, Vector{1.0, 1.0}) ==
          doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("per-pollutant effects recombine into the all-pollutant formula") {
    RngStream rng(6, 6);
    for (int rep = 0; rep < 200; ++rep) {
      const std::size_t q = 2 + static_cast<std::size_t>(rng.uniform() * 3);
      Vector ls(r_components(q));
      for (auto& v : ls) v = draw_std_normal(rng);
      const auto w = transform_weights(ls, q);
      if (w.degenerate()) continue;
      Vector z(q);
      for (auto& v : z) v = draw_std_normal(rng);
      const double alpha = 0.6 * draw_std_normal(rng);
      double sum = 0.0;
      for (std::size_t j = 0; j < q; ++j) {
        sum += pollutant_effect(w, alpha, z, j);
      }
      double inter_total = 0.0;
      for (double v : w.inter) inter_total += v;
      CHECK(std::fabs(sum + inter_total * alpha -
                      all_pollutant_effect(w, alpha, z)) < 1e-10);
    }
  }
}

TEST_CASE("geweke diagnostic") {
  SUBCASE("chain too short") {
    Vector x(50, 1.0);
    CHECK_THROWS_AS(geweke_z(x), input_error);
  }
  SUBCASE("constant chain has no variance") {
    Vector x(1000, 3.14);
    CHECK_THROWS_AS(geweke_z(x), input_error);
  }
  SUBCASE("a 2-SD mean step produces |z| > 5") {
    RngStream rng(7, 7);
    Vector x(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = draw_std_normal(rng) + (i >= 5000 ? 2.0 : 0.0);
    }
    CHECK(std::fabs(geweke_z(x)) > 5.0);
  }
  SUBCASE("iid normal smoke calibration (loose)") {
    RngStream rng(8, 8);
    int rejections = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
      Vector x(10000);
      for (auto& v : x) v = draw_std_normal(rng);
      if (std::fabs(geweke_z(x)) > 1.96) ++rejections;
    }
    CHECK(rejections < 15);  // tight two-sided band lives in the acceptance suite
  }
}

TEST_CASE("scalar summary quantiles and moments") {
  Vector draws{5.0, 1.0, 3.0, 2.0, 4.0};
  const auto s = summarize_scalar("x", draws);
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.q50 == doctest::Approx(3.0));
  CHECK(s.q025 == doctest::Approx(1.1).epsilon(1e-12));  // type-7
  CHECK_FALSE(s.geweke_ok);  // too short for a z-score
}
