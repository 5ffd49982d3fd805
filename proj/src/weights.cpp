#include "cwvsmix/weights.hpp"

#include <algorithm>
#include <cstring>

#include "cwvsmix/errors.hpp"
#include "cwvsmix/kernels.hpp"

namespace cwvsmix {

std::size_t interaction_index(std::size_t j, std::size_t k, std::size_t q) {
  // Offset past the mains, then count pairs preceding (j, k).
  return q + j * q - j * (j + 1) / 2 + (k - j - 1);
}

WeightVector transform_weights(std::span<const double> lambda_star_t,
                               std::size_t q) {
  if (lambda_star_t.size() != r_components(q)) {
    throw input_error("transform_weights: length mismatch");
  }
  WeightVector w;
  w.main.assign(q, 0.0);
  w.inter.assign(q * (q - 1) / 2, 0.0);

  double d = 0.0;
  for (std::size_t j = 0; j < q; ++j) {
    const double num = std::max(lambda_star_t[j], 0.0);
    w.main[j] = num;
    d += num;
  }
  std::size_t idx = 0;
  for (std::size_t j = 0; j + 1 < q; ++j) {
    for (std::size_t k = j + 1; k < q; ++k, ++idx) {
      const bool parents_active =
          lambda_star_t[j] > 0.0 && lambda_star_t[k] > 0.0;
      const double num =
          parents_active ? std::max(lambda_star_t[q + idx], 0.0) : 0.0;
      w.inter[idx] = num;
      d += num;
    }
  }
  if (d == 0.0) {
    // All main-effect latents <= 0: every weight is zero by policy.
    w.total = 0.0;
    return w;
  }
  for (double& v : w.main) v /= d;
  for (double& v : w.inter) v /= d;
  w.total = 1.0;
  return w;
}

WeightVector weight_vector_from_column(std::span<const double> col,
                                       std::size_t q) {
  if (col.size() != r_components(q)) {
    throw input_error("weight_vector_from_column: length mismatch");
  }
  WeightVector w;
  w.main.assign(col.begin(), col.begin() + q);
  w.inter.assign(col.begin() + q, col.end());
  double s = 0.0;
  for (double v : col) s += v;
  w.total = (s > 0.5) ? 1.0 : 0.0;
  return w;
}

double mixture_exposure(const WeightVector& w, std::span<const double> z_t) {
  const std::size_t q = w.q();
  if (z_t.size() != q) throw input_error("mixture_exposure: dimension mismatch");
  if (w.degenerate()) return 0.0;
  double g = 0.0;
  for (std::size_t j = 0; j < q; ++j) g += w.main[j] * z_t[j];
  std::size_t idx = 0;
  for (std::size_t j = 0; j + 1 < q; ++j) {
    for (std::size_t k = j + 1; k < q; ++k, ++idx) {
      if (w.inter[idx] != 0.0) g += w.inter[idx] * (z_t[j] * z_t[k]);
    }
  }
  return g;
}

void design_column(const WeightVector& w, const ExposureTensor& z,
                   std::size_t t, double* out_col) {
  const std::size_t n = z.n;
  std::memset(out_col, 0, n * sizeof(double));
  if (w.degenerate()) return;
  const std::size_t q = z.q;
  for (std::size_t j = 0; j < q; ++j) {
    if (w.main[j] != 0.0) {
      kernels::axpy(w.main[j], z.slice(j, t), out_col, n);
    }
  }
  std::size_t idx = 0;
  for (std::size_t j = 0; j + 1 < q; ++j) {
    for (std::size_t k = j + 1; k < q; ++k, ++idx) {
      if (w.inter[idx] != 0.0) {
        kernels::axpyz(w.inter[idx], z.slice(j, t), z.slice(k, t), out_col, n);
      }
    }
  }
}

Matrix weighted_design_matrix(const LatentWeightField& field,
                              const ExposureTensor& z) {
  if (field.m != z.m || field.q != z.q) {
    throw input_error("weighted_design_matrix: dimension mismatch");
  }
  Matrix g(z.n, z.m);
  const std::size_t r = r_components(z.q);
  for (std::size_t t = 0; t < z.m; ++t) {
    const WeightVector w = transform_weights(
        std::span<const double>(field.lambda_star.col(t), r), z.q);
    design_column(w, z, t, g.col(t));
  }
  return g;
}

}  // namespace cwvsmix
