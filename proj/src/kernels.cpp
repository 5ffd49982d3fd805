#include "cwvsmix/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace cwvsmix::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Backend detect() {
  if (const char* env = std::getenv("CWVSMIX_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<int> g_forced{-1};  // -1 auto, else Backend value

}  // namespace

Backend active_backend() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Backend>(forced);
  static const Backend auto_detected = detect();
  return auto_detected;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(std::optional<Backend> b) {
  g_forced.store(b ? static_cast<int>(*b) : -1, std::memory_order_relaxed);
}

double sum(const double* x, std::size_t n) {
  return active_backend() == Backend::avx2 ? detail::sum_avx2(x, n)
                                           : detail::sum_scalar(x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  return active_backend() == Backend::avx2 ? detail::dot_avx2(x, y, n)
                                           : detail::dot_scalar(x, y, n);
}

double wdot(const double* w, const double* x, const double* y,
            std::size_t n) {
  return active_backend() == Backend::avx2 ? detail::wdot_avx2(w, x, y, n)
                                           : detail::wdot_scalar(w, x, y, n);
}

double wsse(const double* w, const double* r, std::size_t n) {
  return active_backend() == Backend::avx2 ? detail::wsse_avx2(w, r, n)
                                           : detail::wsse_scalar(w, r, n);
}

double wsse_shift(const double* w, const double* r, const double* d, double a,
                  std::size_t n) {
  return active_backend() == Backend::avx2
             ? detail::wsse_shift_avx2(w, r, d, a, n)
             : detail::wsse_shift_scalar(w, r, d, a, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  if (active_backend() == Backend::avx2) {
    detail::axpy_avx2(a, x, y, n);
  } else {
    detail::axpy_scalar(a, x, y, n);
  }
}

void axpyz(double a, const double* x, const double* z, double* y,
           std::size_t n) {
  if (active_backend() == Backend::avx2) {
    detail::axpyz_avx2(a, x, z, y, n);
  } else {
    detail::axpyz_scalar(a, x, z, y, n);
  }
}

}  // namespace cwvsmix::kernels
