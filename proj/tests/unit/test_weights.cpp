#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cwvsmix/errors.hpp"
#include "cwvsmix/samplers.hpp"
#include "cwvsmix/weights.hpp"

using namespace cwvsmix;

TEST_CASE("latent-to-weight transform, hand-evaluated cases") {
  {
    // interaction killed because the second main latent is <= 0
    const auto w = transform_weights(Vector{0.6, -0.2, 0.4}, 2);
    CHECK(w.main[0] == doctest::Approx(1.0));
    CHECK(w.main[1] == 0.0);
    CHECK(w.inter[0] == 0.0);
    CHECK(w.total == 1.0);
  }
  {
    // d = 4
    const auto w = transform_weights(Vector{1.0, 1.0, 2.0}, 2);
    CHECK(w.main[0] == doctest::Approx(0.25));
    CHECK(w.main[1] == doctest::Approx(0.25));
    CHECK(w.inter[0] == doctest::Approx(0.5));
  }
  {
    // every main latent <= 0: the degenerate all-zero case
    const auto w = transform_weights(Vector{-0.1, -0.5, 0.9}, 2);
    CHECK(w.total == 0.0);
    CHECK(w.main[0] == 0.0);
    CHECK(w.main[1] == 0.0);
    CHECK(w.inter[0] == 0.0);
  }
  {
    // d = 0.6
    const auto w = transform_weights(Vector{0.3, 0.3, -0.3}, 2);
    CHECK(w.main[0] == doctest::Approx(0.5));
    CHECK(w.main[1] == doctest::Approx(0.5));
    CHECK(w.inter[0] == 0.0);
  }
  CHECK_THROWS_AS(transform_weights(Vector{1.0, 2.0}, 2), input_error);
}

TEST_CASE("mixture exposure, hand-evaluated cases") {
  {
    const auto w = transform_weights(Vector{0.6, -0.2, 0.4}, 2);
    CHECK(mixture_exposure(w, Vector{2.5, -7.0}) == doctest::Approx(2.5));
  }
  {
    const auto w = transform_weights(Vector{1.0, 1.0, 2.0}, 2);
    CHECK(mixture_exposure(w, Vector{1.0, 1.0}) == doctest::Approx(1.0));
  }
  {
    const auto w = transform_weights(Vector{-1.0, -1.0, 2.0}, 2);
    CHECK(mixture_exposure(w, Vector{3.0, 4.0}) == 0.0);
  }
}

TEST_CASE("mixture exposure is linear in z when no interactions are active") {
  RngStream rng(5, 5);
  const auto w = transform_weights(Vector{0.9, 0.4, -1.0}, 2);
  for (int rep = 0; rep < 100; ++rep) {
    Vector z{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    Vector z2{3.0 * z[0], 3.0 * z[1]};
    CHECK(mixture_exposure(w, z2) ==
          doctest::Approx(3.0 * mixture_exposure(w, z)).epsilon(1e-12));
  }
}

TEST_CASE("randomized transform invariants across q") {
  RngStream rng(99, 1);
  for (std::size_t q = 1; q <= 6; ++q) {
    const std::size_t r = r_components(q);
    std::size_t degenerate = 0;
    const std::size_t reps = 10000;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      Vector ls(r);
      for (auto& v : ls) v = draw_std_normal(rng);
      const auto w = transform_weights(ls, q);
      double total = 0.0;
      for (double v : w.main) {
        CHECK(v >= 0.0);
        total += v;
      }
      for (double v : w.inter) {
        CHECK(v >= 0.0);
        total += v;
      }
      if (w.total == 0.0) {
        ++degenerate;
        CHECK(total == 0.0);
      } else {
        CHECK(std::fabs(total - 1.0) <= 1e-12);
      }
      // strong hierarchy, exactly
      std::size_t idx = 0;
      for (std::size_t j = 0; j + 1 < q; ++j) {
        for (std::size_t k = j + 1; k < q; ++k, ++idx) {
          if (w.inter[idx] > 0.0) {
            CHECK(w.main[j] > 0.0);
            CHECK(w.main[k] > 0.0);
          }
        }
      }
      // positive rescaling of the latents leaves weights unchanged
      if (rep < 200) {
        Vector scaled(r);
        for (std::size_t c = 0; c < r; ++c) scaled[c] = 2.7 * ls[c];
        const auto w2 = transform_weights(scaled, q);
        for (std::size_t j = 0; j < q; ++j) {
          CHECK(w2.main[j] == doctest::Approx(w.main[j]).epsilon(1e-12));
        }
        for (std::size_t c = 0; c < w.inter.size(); ++c) {
          CHECK(w2.inter[c] == doctest::Approx(w.inter[c]).epsilon(1e-12));
        }
      }
    }
    // P(all mains <= 0) = 2^-q under the standard-normal prior
    const double expect = std::pow(0.5, static_cast<double>(q));
    const double se = std::sqrt(expect * (1.0 - expect) / reps);
    CHECK(std::fabs(static_cast<double>(degenerate) / reps - expect) <=
          3.0 * se);
  }
}

TEST_CASE("single-pollutant collapse gives weight exactly one") {
  const auto w = transform_weights(Vector{0.0, 0.37, -0.2}, 2);
  CHECK(w.main[0] == 0.0);
  CHECK(w.main[1] == 1.0);
}

TEST_CASE("weighted design matrix") {
  RngStream rng(3, 3);
  SUBCASE("q=1 with positive latents reproduces the raw exposures") {
    const std::size_t n = 7, m = 3;
    ExposureTensor z(n, m, 1);
    for (auto& v : z.values) v = draw_std_normal(rng);
    LatentWeightField f(m, 1);
    for (std::size_t t = 0; t < m; ++t) f.lambda_star(0, t) = 0.5 + rng.uniform();
    const Matrix g = weighted_design_matrix(f, z);
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(g(i, t) == doctest::Approx(z.at(i, 0, t)).epsilon(1e-15));
      }
    }
  }
  SUBCASE("changing one period touches only that column") {
    const std::size_t n = 9, m = 4, q = 2;
    ExposureTensor z(n, m, q);
    for (auto& v : z.values) v = draw_std_normal(rng);
    LatentWeightField f(m, q);
    for (std::size_t k = 0; k < f.lambda_star.size(); ++k) {
      f.lambda_star.data()[k] = draw_std_normal(rng);
    }
    Matrix g = weighted_design_matrix(f, z);
    LatentWeightField f2 = f;
    f2.lambda_star(0, 2) += 1.5;
    const Matrix g2 = weighted_design_matrix(f2, z);
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        if (t != 2) CHECK(g(i, t) == g2(i, t));
      }
    }
    // incremental column refresh agrees with the full rebuild
    const auto w2 = transform_weights(
        std::span<const double>(f2.lambda_star.col(2), r_components(q)), q);
    design_column(w2, z, 2, g.col(2));
    for (std::size_t i = 0; i < n; ++i) CHECK(g(i, 2) == g2(i, 2));
  }
  SUBCASE("matches direct per-entry recomputation") {
    const std::size_t n = 3, m = 2, q = 2;
    ExposureTensor z(n, m, q);
    for (auto& v : z.values) v = draw_std_normal(rng);
    LatentWeightField f(m, q);
    for (std::size_t k = 0; k < f.lambda_star.size(); ++k) {
      f.lambda_star.data()[k] = draw_std_normal(rng);
    }
    const Matrix g = weighted_design_matrix(f, z);
    for (std::size_t t = 0; t < m; ++t) {
      const auto w = transform_weights(
          std::span<const double>(f.lambda_star.col(t), r_components(q)), q);
      for (std::size_t i = 0; i < n; ++i) {
        const Vector zi{z.at(i, 0, t), z.at(i, 1, t)};
        const double direct = w.main[0] * zi[0] + w.main[1] * zi[1] +
                              w.inter[0] * zi[0] * zi[1];
        CHECK(g(i, t) == doctest::Approx(direct).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("interaction index ordering is lexicographic") {
  CHECK(interaction_index(0, 1, 4) == 4);
  CHECK(interaction_index(0, 2, 4) == 5);
  CHECK(interaction_index(0, 3, 4) == 6);
  CHECK(interaction_index(1, 2, 4) == 7);
  CHECK(interaction_index(1, 3, 4) == 8);
  CHECK(interaction_index(2, 3, 4) == 9);
}
