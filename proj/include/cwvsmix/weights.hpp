#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cwvsmix/linalg.hpp"

namespace cwvsmix {

// Number of weight components per period: q mains + q(q-1)/2 interactions.
constexpr std::size_t r_components(std::size_t q) { return q * (q + 1) / 2; }

// Index of interaction (j, k), j < k, within the per-period component block.
// Components are ordered mains first (pollutant index order), then
// interactions lexicographically: (0,1), (0,2), ..., (0,q-1), (1,2), ...
// This ordering is fixed project-wide and mirrored in the file formats.
std::size_t interaction_index(std::size_t j, std::size_t k, std::size_t q);

// Sum-to-one mixture weights for one exposure period.  Either all components
// are zero (every main-effect latent was <= 0) or they sum to one.
struct WeightVector {
  std::vector<double> main;   // length q, lambda_j(t) in [0, 1]
  std::vector<double> inter;  // length q(q-1)/2, lambda~_jk(t) in [0, 1)
  double total = 0.0;         // 0 in the degenerate case, else 1

  bool degenerate() const { return total == 0.0; }
  std::size_t q() const { return main.size(); }
};

// The latent-to-weight transform: numerators are max(latent, 0) for mains
// and max(latent, 0) * 1{both parent mains positive} for interactions,
// normalized by their sum d(t).  If d(t) = 0 every weight is zero and the
// period's mixture exposure vanishes.
WeightVector transform_weights(std::span<const double> lambda_star_t,
                               std::size_t q);

// Scalar weighted exposure for one subject/period:
// sum_j main_j z_j + sum_{j<k} inter_jk z_j z_k.
double mixture_exposure(const WeightVector& w, std::span<const double> z_t);

// Latent field lambda*: one r-component column per exposure period.
struct LatentWeightField {
  std::size_t m = 0, q = 0;
  Matrix lambda_star;  // r x m, column t = lambda*(t)

  LatentWeightField() = default;
  LatentWeightField(std::size_t m_, std::size_t q_)
      : m(m_), q(q_), lambda_star(r_components(q_), m_) {}
};

// Exposures, slice-contiguous: slice(j, t) is the length-n vector of
// pollutant j at period t across subjects.
struct ExposureTensor {
  std::size_t n = 0, m = 0, q = 0;
  std::vector<double> values;  // ((t * q) + j) * n + i

  ExposureTensor() = default;
  ExposureTensor(std::size_t n_, std::size_t m_, std::size_t q_)
      : n(n_), m(m_), q(q_), values(n_ * m_ * q_, 0.0) {}

  double& at(std::size_t i, std::size_t j, std::size_t t) {
    return values[(t * q + j) * n + i];
  }
  double at(std::size_t i, std::size_t j, std::size_t t) const {
    return values[(t * q + j) * n + i];
  }
  double* slice(std::size_t j, std::size_t t) {
    return values.data() + (t * q + j) * n;
  }
  const double* slice(std::size_t j, std::size_t t) const {
    return values.data() + (t * q + j) * n;
  }
};

// Reassembles a WeightVector from a stored r-component column (mains first,
// then interactions).  total is the component sum, snapped to 0 or 1.
WeightVector weight_vector_from_column(std::span<const double> col,
                                       std::size_t q);

// Writes column t of the n x m weighted design matrix G from the given
// per-period weights; the per-column form is what the blocked Metropolis
// step uses to touch only the period it changed.
void design_column(const WeightVector& w, const ExposureTensor& z,
                   std::size_t t, double* out_col);

// Full G: G[i][t] = mixture exposure of subject i at period t.
Matrix weighted_design_matrix(const LatentWeightField& field,
                              const ExposureTensor& z);

}  // namespace cwvsmix
