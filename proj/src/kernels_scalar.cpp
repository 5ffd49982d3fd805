#include "cwvsmix/kernels.hpp"

// Reference kernels.  The 4-lane accumulators mirror the AVX2 register lanes;
// keep the arithmetic order in sync with kernels_avx2.cpp.

namespace cwvsmix::kernels::detail {

namespace {
inline double combine(const double acc[4], double tail) {
  return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
}
}  // namespace

double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return combine(acc, tail);
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += x[i] * y[i];
    acc[1] += x[i + 1] * y[i + 1];
    acc[2] += x[i + 2] * y[i + 2];
    acc[3] += x[i + 3] * y[i + 3];
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return combine(acc, tail);
}

double wdot_scalar(const double* w, const double* x, const double* y,
                   std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += (w[i] * x[i]) * y[i];
    acc[1] += (w[i + 1] * x[i + 1]) * y[i + 1];
    acc[2] += (w[i + 2] * x[i + 2]) * y[i + 2];
    acc[3] += (w[i + 3] * x[i + 3]) * y[i + 3];
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += (w[i] * x[i]) * y[i];
  return combine(acc, tail);
}

double wsse_scalar(const double* w, const double* r, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += w[i] * (r[i] * r[i]);
    acc[1] += w[i + 1] * (r[i + 1] * r[i + 1]);
    acc[2] += w[i + 2] * (r[i + 2] * r[i + 2]);
    acc[3] += w[i + 3] * (r[i + 3] * r[i + 3]);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += w[i] * (r[i] * r[i]);
  return combine(acc, tail);
}

double wsse_shift_scalar(const double* w, const double* r, const double* d,
                         double a, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double t0 = r[i] - a * d[i];
    const double t1 = r[i + 1] - a * d[i + 1];
    const double t2 = r[i + 2] - a * d[i + 2];
    const double t3 = r[i + 3] - a * d[i + 3];
    acc[0] += w[i] * (t0 * t0);
    acc[1] += w[i + 1] * (t1 * t1);
    acc[2] += w[i + 2] * (t2 * t2);
    acc[3] += w[i + 3] * (t3 * t3);
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double t = r[i] - a * d[i];
    tail += w[i] * (t * t);
  }
  return combine(acc, tail);
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpyz_scalar(double a, const double* x, const double* z, double* y,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += (a * x[i]) * z[i];
}

}  // namespace cwvsmix::kernels::detail
