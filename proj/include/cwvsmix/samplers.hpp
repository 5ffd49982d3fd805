#pragma once

#include <span>
#include <vector>

#include "cwvsmix/linalg.hpp"
#include "cwvsmix/rng.hpp"

namespace cwvsmix {

enum class TruncationSide { at_most_zero, above_zero };

// Standard normal via the AS 241 inverse CDF: one uniform per draw,
// strictly monotone in the uniform.
double draw_std_normal(RngStream& rng);

// Exact Polya-Gamma PG(1, c) draw (alternating-series rejection sampler).
// Only b = 1 is supported; the distribution depends on c through |c|.
double draw_polya_gamma(int b, double c, RngStream& rng);

// N(mean, sd^2) restricted to (-inf, 0] or (0, inf).  Inverse CDF for mild
// truncation; exponential-proposal rejection once the standardized bound
// exceeds 4, where the inverse CDF loses precision.
double draw_truncated_normal(double mean, double sd, TruncationSide side,
                             RngStream& rng);

// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
double draw_gamma(double shape, RngStream& rng);

// Dirichlet(alpha); components positive and summing to one.
std::vector<double> draw_dirichlet(std::span<const double> alpha,
                                   RngStream& rng);

// mean + L z with z iid standard normal; L a lower-triangular Cholesky
// factor with strictly positive diagonal.
std::vector<double> draw_mvn(std::span<const double> mean,
                             const Matrix& chol_lower, RngStream& rng);

}  // namespace cwvsmix
