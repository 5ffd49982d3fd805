#pragma once

#include <cstddef>
#include <optional>

// Data-parallel inner loops of the sampler: weighted dot products, weighted
// sums of squared (shifted) residuals, and axpy-style column updates.
// Every reduction accumulates in four interleaved lanes and combines them as
// ((lane0 + lane2) + (lane1 + lane3)) + tail, and no kernel uses FMA, so the
// scalar and AVX2 backends return bit-identical doubles.  Backend choice is
// therefore a pure speed decision and never perturbs a chain.

namespace cwvsmix::kernels {

enum class Backend { scalar, avx2 };

bool cpu_has_avx2();
Backend active_backend();
const char* backend_name(Backend b);

// Override dispatch (tests, or CWVSMIX_KERNELS=scalar|avx2 in the
// environment, read once at first use).  nullopt restores auto-detection.
void force_backend(std::optional<Backend> b);

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);

// sum_i w[i] * x[i] * y[i]
double wdot(const double* w, const double* x, const double* y, std::size_t n);

// sum_i w[i] * r[i]^2
double wsse(const double* w, const double* r, std::size_t n);

// sum_i w[i] * (r[i] - a*d[i])^2 -- candidate quadratic form for a Metropolis
// move that shifts the residual by a*d without materializing it.
double wsse_shift(const double* w, const double* r, const double* d, double a,
                  std::size_t n);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// y[i] += a * x[i] * z[i] -- interaction-term accumulation.
void axpyz(double a, const double* x, const double* z, double* y,
           std::size_t n);

namespace detail {
double sum_scalar(const double*, std::size_t);
double dot_scalar(const double*, const double*, std::size_t);
double wdot_scalar(const double*, const double*, const double*, std::size_t);
double wsse_scalar(const double*, const double*, std::size_t);
double wsse_shift_scalar(const double*, const double*, const double*, double,
                         std::size_t);
void axpy_scalar(double, const double*, double*, std::size_t);
void axpyz_scalar(double, const double*, const double*, double*, std::size_t);

double sum_avx2(const double*, std::size_t);
double dot_avx2(const double*, const double*, std::size_t);
double wdot_avx2(const double*, const double*, const double*, std::size_t);
double wsse_avx2(const double*, const double*, std::size_t);
double wsse_shift_avx2(const double*, const double*, const double*, double,
                       std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void axpyz_avx2(double, const double*, const double*, double*, std::size_t);
}  // namespace detail

}  // namespace cwvsmix::kernels
