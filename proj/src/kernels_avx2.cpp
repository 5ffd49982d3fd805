#include "cwvsmix/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// AVX2 variants.  Lane k of the vector accumulator matches acc[k] in the
// scalar reference; the horizontal combine replays the same scalar adds.
// mul+add only (no _mm256_fmadd_pd) so results are bit-identical to the
// scalar path built with -ffp-contract=off.

namespace cwvsmix::kernels::detail {

namespace {
__attribute__((target("avx2"))) inline double reduce(__m256d vacc,
                                                     double tail) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, vacc);
  return ((lane[0] + lane[2]) + (lane[1] + lane[3])) + tail;
}
}  // namespace

__attribute__((target("avx2")))
double sum_avx2(const double* x, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return reduce(vacc, tail);
}

__attribute__((target("avx2")))
double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    vacc = _mm256_add_pd(vacc, _mm256_mul_pd(vx, vy));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return reduce(vacc, tail);
}

__attribute__((target("avx2")))
double wdot_avx2(const double* w, const double* x, const double* y,
                 std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    vacc = _mm256_add_pd(vacc, _mm256_mul_pd(_mm256_mul_pd(vw, vx), vy));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += (w[i] * x[i]) * y[i];
  return reduce(vacc, tail);
}

__attribute__((target("avx2")))
double wsse_avx2(const double* w, const double* r, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d vr = _mm256_loadu_pd(r + i);
    vacc = _mm256_add_pd(vacc, _mm256_mul_pd(vw, _mm256_mul_pd(vr, vr)));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += w[i] * (r[i] * r[i]);
  return reduce(vacc, tail);
}

__attribute__((target("avx2")))
double wsse_shift_avx2(const double* w, const double* r, const double* d,
                       double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d vr = _mm256_loadu_pd(r + i);
    const __m256d vd = _mm256_loadu_pd(d + i);
    const __m256d vt = _mm256_sub_pd(vr, _mm256_mul_pd(va, vd));
    vacc = _mm256_add_pd(vacc, _mm256_mul_pd(vw, _mm256_mul_pd(vt, vt)));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double t = r[i] - a * d[i];
    tail += w[i] * (t * t);
  }
  return reduce(vacc, tail);
}

__attribute__((target("avx2")))
void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2")))
void axpyz_avx2(double a, const double* x, const double* z, double* y,
                std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vz = _mm256_loadu_pd(z + i);
    _mm256_storeu_pd(
        y + i, _mm256_add_pd(vy, _mm256_mul_pd(_mm256_mul_pd(va, vx), vz)));
  }
  for (; i < n; ++i) y[i] += (a * x[i]) * z[i];
}

}  // namespace cwvsmix::kernels::detail

#else  // non-x86: dispatch never selects these

namespace cwvsmix::kernels::detail {
double sum_avx2(const double* x, std::size_t n) { return sum_scalar(x, n); }
double dot_avx2(const double* x, const double* y, std::size_t n) {
  return dot_scalar(x, y, n);
}
double wdot_avx2(const double* w, const double* x, const double* y,
                 std::size_t n) {
  return wdot_scalar(w, x, y, n);
}
double wsse_avx2(const double* w, const double* r, std::size_t n) {
  return wsse_scalar(w, r, n);
}
double wsse_shift_avx2(const double* w, const double* r, const double* d,
                       double a, std::size_t n) {
  return wsse_shift_scalar(w, r, d, a, n);
}
void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  axpy_scalar(a, x, y, n);
}
void axpyz_avx2(double a, const double* x, const double* z, double* y,
                std::size_t n) {
  axpyz_scalar(a, x, z, y, n);
}
}  // namespace cwvsmix::kernels::detail

#endif
