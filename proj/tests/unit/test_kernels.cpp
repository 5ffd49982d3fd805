#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "cwvsmix/kernels.hpp"
#include "cwvsmix/rng.hpp"

using namespace cwvsmix;

namespace {

std::vector<double> randvec(std::size_t n, RngStream& rng, double lo = -2.0,
                            double hi = 2.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

long double naive_dot(const std::vector<double>& x,
                      const std::vector<double>& y) {
  long double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += static_cast<long double>(x[i]) * y[i];
  }
  return s;
}

}  // namespace

TEST_CASE("scalar and avx2 backends are bit-identical") {
  if (!kernels::cpu_has_avx2()) return;
  RngStream rng(2024, 1);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 63u, 64u, 1001u}) {
    const auto w = randvec(n, rng, 0.01, 1.0);
    const auto x = randvec(n, rng);
    const auto y = randvec(n, rng);
    const double a = -0.37;
    using namespace kernels::detail;
    CHECK(sum_scalar(x.data(), n) == sum_avx2(x.data(), n));
    CHECK(dot_scalar(x.data(), y.data(), n) == dot_avx2(x.data(), y.data(), n));
    CHECK(wdot_scalar(w.data(), x.data(), y.data(), n) ==
          wdot_avx2(w.data(), x.data(), y.data(), n));
    CHECK(wsse_scalar(w.data(), x.data(), n) ==
          wsse_avx2(w.data(), x.data(), n));
    CHECK(wsse_shift_scalar(w.data(), x.data(), y.data(), a, n) ==
          wsse_shift_avx2(w.data(), x.data(), y.data(), a, n));
    auto y1 = y, y2 = y;
    axpy_scalar(a, x.data(), y1.data(), n);
    axpy_avx2(a, x.data(), y2.data(), n);
    CHECK(y1 == y2);
    auto z1 = y, z2 = y;
    axpyz_scalar(a, x.data(), w.data(), z1.data(), n);
    axpyz_avx2(a, x.data(), w.data(), z2.data(), n);
    CHECK(z1 == z2);
  }
}

TEST_CASE("reductions match a long-double reference") {
  RngStream rng(7, 7);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 700);
    const auto w = randvec(n, rng, 0.01, 1.0);
    const auto x = randvec(n, rng);
    const auto y = randvec(n, rng);
    const double a = 2.0 * rng.uniform() - 1.0;

    CHECK(kernels::dot(x.data(), y.data(), n) ==
          doctest::Approx(static_cast<double>(naive_dot(x, y))).epsilon(1e-12));

    long double ref = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ref += (long double)w[i] * x[i] * y[i];
    }
    CHECK(kernels::wdot(w.data(), x.data(), y.data(), n) ==
          doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));

    ref = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const long double t = (long double)x[i] - (long double)a * y[i];
      ref += w[i] * t * t;
    }
    CHECK(kernels::wsse_shift(w.data(), x.data(), y.data(), a, n) ==
          doctest::Approx(static_cast<double>(ref)).epsilon(1e-11));

    ref = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ref += (long double)w[i] * x[i] * x[i];
    }
    CHECK(kernels::wsse(w.data(), x.data(), n) ==
          doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  }
}

TEST_CASE("axpy and axpyz update elementwise") {
  RngStream rng(9, 9);
  const std::size_t n = 101;
  const auto x = randvec(n, rng);
  const auto z = randvec(n, rng);
  auto y = randvec(n, rng);
  auto expect = y;
  kernels::axpy(0.5, x.data(), y.data(), n);
  for (std::size_t i = 0; i < n; ++i) expect[i] += 0.5 * x[i];
  CHECK(y == expect);
  kernels::axpyz(-1.25, x.data(), z.data(), y.data(), n);
  for (std::size_t i = 0; i < n; ++i) expect[i] += (-1.25 * x[i]) * z[i];
  CHECK(y == expect);
}

TEST_CASE("forced backend dispatch") {
  RngStream rng(3, 3);
  const auto x = randvec(257, rng);
  const auto y = randvec(257, rng);
  kernels::force_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  const double ds = kernels::dot(x.data(), y.data(), x.size());
  if (kernels::cpu_has_avx2()) {
    kernels::force_backend(kernels::Backend::avx2);
    CHECK(kernels::active_backend() == kernels::Backend::avx2);
    CHECK(kernels::dot(x.data(), y.data(), x.size()) == ds);
  }
  kernels::force_backend(std::nullopt);
}
