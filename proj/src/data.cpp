#include "cwvsmix/data.hpp"

#include <algorithm>
#include <cmath>

#include "cwvsmix/errors.hpp"

namespace cwvsmix {

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw input_error("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

ScalingInfo iqr_standardize(ExposureTensor& z,
                            const std::vector<std::string>& pollutant_names) {
  ScalingInfo info;
  info.applied = true;
  info.median = Matrix(z.q, z.m);
  info.iqr = Matrix(z.q, z.m);
  std::vector<double> slice(z.n);
  for (std::size_t t = 0; t < z.m; ++t) {
    for (std::size_t j = 0; j < z.q; ++j) {
      const double* src = z.slice(j, t);
      slice.assign(src, src + z.n);
      const double med = quantile_type7(slice, 0.5);
      const double iqr =
          quantile_type7(slice, 0.75) - quantile_type7(slice, 0.25);
      if (!(iqr > 0.0)) {
        const std::string name = (j < pollutant_names.size())
                                     ? pollutant_names[j]
                                     : "pollutant " + std::to_string(j + 1);
        throw input_error("iqr_standardize: zero IQR for " + name +
                          " at period " + std::to_string(t + 1));
      }
      info.median(j, t) = med;
      info.iqr(j, t) = iqr;
      double* dst = z.slice(j, t);
      for (std::size_t i = 0; i < z.n; ++i) dst[i] = (dst[i] - med) / iqr;
    }
  }
  return info;
}

}  // namespace cwvsmix
