#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "cwvsmix/covariance.hpp"
#include "cwvsmix/errors.hpp"
#include "cwvsmix/rng.hpp"
#include "dense_oracle.hpp"

using namespace cwvsmix;

TEST_CASE("exp-correlation entries") {
  const auto c = build_exp_corr(2, std::log(2.0));
  CHECK(c.entries(0, 0) == 1.0);
  CHECK(c.entries(1, 1) == 1.0);
  CHECK(c.entries(0, 1) == doctest::Approx(0.5).epsilon(1e-15));

  const auto far = build_exp_corr(5, 50.0);
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t s = t + 1; s < 5; ++s) {
      CHECK(far.entries(t, s) < 2e-22);
    }
  }

  const auto one = build_exp_corr(1, 3.7);
  CHECK(one.entries(0, 0) == 1.0);
  CHECK(one.log_det == doctest::Approx(0.0));
}

TEST_CASE("invalid phi rejected") {
  CHECK_THROWS_AS(build_exp_corr(3, 0.0), input_error);
  CHECK_THROWS_AS(build_exp_corr(3, -1.0), input_error);
  CHECK_THROWS_AS(build_exp_corr(3, std::nan("")), input_error);
  CHECK_THROWS_AS(build_exp_corr(0, 1.0), input_error);
}

TEST_CASE("factorization identities over the (m, phi) grid") {
  for (std::size_t m : {1u, 2u, 5u, 12u, 25u}) {
    for (double phi : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const auto c = build_exp_corr(m, phi);
      CHECK(c.jitter == 0.0);
      // chol * cholT reproduces entries
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          double v = 0.0;
          for (std::size_t k = 0; k <= j; ++k) v += c.chol(i, k) * c.chol(j, k);
          CHECK(std::fabs(v - c.entries(i, j)) < 1e-10);
        }
      }
      // inverse * entries = identity
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          double v = 0.0;
          for (std::size_t k = 0; k < m; ++k) {
            v += c.inverse(i, k) * c.entries(k, j);
          }
          CHECK(std::fabs(v - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
      }
      // AR(1)-type structure: the inverse is tridiagonal
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j + 1 < i; ++j) {
          CHECK(std::fabs(c.inverse(i, j)) < 1e-8);
        }
      }
      // log-det against Eigen
      const Eigen::MatrixXd dense = oracle::exp_corr(m, phi);
      CHECK(c.log_det ==
            doctest::Approx(std::log(dense.determinant())).epsilon(1e-8));
    }
  }
}

TEST_CASE("entries decrease in lag and in phi") {
  const auto a = build_exp_corr(6, 0.7);
  for (std::size_t lag = 1; lag + 1 < 6; ++lag) {
    CHECK(a.entries(0, lag) > a.entries(0, lag + 1));
  }
  const auto b = build_exp_corr(6, 1.4);
  for (std::size_t lag = 1; lag < 6; ++lag) {
    CHECK(b.entries(0, lag) < a.entries(0, lag));
  }
}

TEST_CASE("kronecker solve: identity factor passes v through") {
  const auto c = build_exp_corr(3, 60.0);  // effectively identity
  const Vector v{1.0, -2.0, 0.5, 3.0, 0.0, -1.0};
  const auto res = kron_weight_prior_solve(c, 2, v);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(res.solved[i] == doctest::Approx(v[i]).epsilon(1e-12));
    norm2 += v[i] * v[i];
  }
  CHECK(res.quad_form == doctest::Approx(norm2).epsilon(1e-12));
}

TEST_CASE("kronecker solve: hand-computed quadratic form") {
  // Sigma = [[1, .5], [.5, 1]]: (1,1) Sigma^{-1} (1,1)^T = 4/3
  const auto c = build_exp_corr(2, std::log(2.0));
  const auto res = kron_weight_prior_solve(c, 1, Vector{1.0, 1.0});
  CHECK(res.quad_form == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(res.log_det == doctest::Approx(std::log(0.75)).epsilon(1e-12));
}

TEST_CASE("kronecker solve: block-stacking identity") {
  const auto c = build_exp_corr(2, 0.8);
  const double a = 0.7, b = -1.3;
  const auto stacked = kron_weight_prior_solve(c, 2, Vector{a, b, a, b});
  const auto qa = kron_weight_prior_solve(c, 1, Vector{a, a});
  const auto qb = kron_weight_prior_solve(c, 1, Vector{b, b});
  CHECK(stacked.quad_form ==
        doctest::Approx(qa.quad_form + qb.quad_form).epsilon(1e-12));
}

TEST_CASE("kronecker solve matches a dense oracle") {
  RngStream rng(17, 17);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 10);
    const std::size_t r = 1 + static_cast<std::size_t>(rng.uniform() * 6);
    if (m * r > 60) continue;
    const double phi = 0.05 + 3.0 * rng.uniform();
    const auto c = build_exp_corr(m, phi);
    Vector v(m * r);
    for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;

    const Eigen::MatrixXd big =
        oracle::kron_identity(oracle::exp_corr(m, phi), r).inverse();
    const Eigen::VectorXd ev = oracle::to_eigen(v);
    const Eigen::VectorXd want = big * ev;
    const auto res = kron_weight_prior_solve(c, r, v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::fabs(res.solved[i] - want(i)) < 1e-9);
    }
    CHECK(std::fabs(res.quad_form - ev.dot(want)) < 1e-9);
    CHECK(res.log_det ==
          doctest::Approx(static_cast<double>(r) *
                          std::log(oracle::exp_corr(m, phi).determinant()))
              .epsilon(1e-7));
  }
}

TEST_CASE("kronecker solve rejects length mismatch") {
  const auto c = build_exp_corr(2, 1.0);
  CHECK_THROWS_AS(kron_weight_prior_solve(c, 2, Vector{1.0, 2.0, 3.0}),
                  input_error);
}
