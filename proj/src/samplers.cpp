#include "cwvsmix/samplers.hpp"

#include <cmath>

#include "cwvsmix/errors.hpp"
#include "cwvsmix/stats_math.hpp"

namespace cwvsmix {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPi2 = kPi * kPi;
constexpr double kLogPi = 1.14472988584940017414;
constexpr double kLog2OverPi = -0.45158270528945486473;  // log(2/pi)

double draw_exponential(RngStream& rng) { return -std::log(rng.uniform()); }

// ---- PG(1, z) machinery: Devroye/Windle alternating-series sampler -------
// J*(1, z) is sampled with truncation point t = 2/pi; PG(1, c) = J*(1, c/2)/4.

// log a_n(x | t): series coefficients, left (x <= t) and right (x > t) forms.
double log_aterm(int n, double x, double t) {
  const double h = n + 0.5;
  if (x <= t) {
    return kLogPi + std::log(h) + 1.5 * (kLog2OverPi - std::log(x)) -
           2.0 * h * h / x;
  }
  return kLogPi + std::log(h) - 0.5 * kPi2 * x * h * h;
}

// Inverse-Gaussian(mu, lambda = 1) via Michael-Schucany-Haas.
double draw_inverse_gaussian(double mu, RngStream& rng) {
  const double u = draw_std_normal(rng);
  const double v = u * u;
  double out =
      mu + 0.5 * mu * (mu * v - std::sqrt(4.0 * mu * v + mu * mu * v * v));
  if (rng.uniform() > mu / (mu + out)) out = mu * mu / out;
  return out;
}

// Gamma truncated to (pi/2, inf), shape 1/2 flavor used by the reciprocal
// inverse-Gaussian proposal (Chung's rejection scheme).
double draw_trunc_gamma_tail(RngStream& rng) {
  const double c = 0.5 * kPi;
  while (true) {
    const double x = 2.0 * draw_exponential(rng) + c;
    const double g = std::sqrt(0.5 * kPi / x);
    if (rng.uniform() <= g) return x;
  }
}

// Inverse-Gaussian(1/z, 1) truncated to (0, t].
double draw_trunc_inverse_gaussian(double z, double t, RngStream& rng) {
  const double mu = 1.0 / z;
  if (!(mu <= t)) {
    // Includes z = 0 (mu infinite): propose 1/X with X tail-truncated gamma,
    // accept against the exp(-z^2 x / 2) tilt.
    while (true) {
      const double x = 1.0 / draw_trunc_gamma_tail(rng);
      if (std::log(rng.uniform()) < -0.5 * z * z * x) return x;
    }
  }
  double x = t + 1.0;
  while (x > t) x = draw_inverse_gaussian(mu, rng);
  return x;
}

// One J*(1, z) draw, z >= 0.
double draw_jacobi_star(double z, RngStream& rng) {
  const double t = 2.0 / kPi;
  const double k = 0.125 * kPi2 + 0.5 * z * z;
  // q/p, the relative mass of the truncated inverse-Gaussian piece versus
  // the truncated exponential piece of the proposal.
  const double log_a = std::log(4.0) - kLogPi - z;
  const double w = std::sqrt(0.5 * kPi);
  const double base = log_a + std::log(k) + k * t;
  const double logf1 = base + stats::log_norm_cdf(w * (t * z - 1.0));
  const double logf2 = base + 2.0 * z + stats::log_norm_cdf(-w * (t * z + 1.0));
  const double q_over_p = std::exp(logf1) + std::exp(logf2);
  const double ratio = 1.0 / (1.0 + q_over_p);

  while (true) {
    double x;
    if (rng.uniform() < ratio) {
      x = t + draw_exponential(rng) / k;
    } else {
      x = draw_trunc_inverse_gaussian(z, t, rng);
    }
    // Alternating-series accept/reject.
    double s = std::exp(log_aterm(0, x, t));
    const double y = rng.uniform() * s;
    int n = 0;
    while (true) {
      ++n;
      if (n % 2 == 1) {
        s -= std::exp(log_aterm(n, x, t));
        if (y <= s) return x;
      } else {
        s += std::exp(log_aterm(n, x, t));
        if (y > s) break;
      }
    }
  }
}

// Standard normal truncated to (a, inf).
double draw_std_normal_lower_tail(double a, RngStream& rng) {
  if (a <= 4.0) {
    // Uniform over the upper-tail mass, mapped back through the quantile.
    const double tail = stats::norm_cdf(-a);
    while (true) {
      const double u = rng.uniform() * tail;
      const double z = -stats::norm_quantile(u);
      if (z > a) return z;
    }
  }
  // Robert's exponential-proposal rejection for the deep tail.
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  while (true) {
    const double z = a + draw_exponential(rng) / alpha;
    const double d = z - alpha;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
  }
}

}  // namespace

double draw_std_normal(RngStream& rng) {
  return stats::norm_quantile(rng.uniform());
}

double draw_polya_gamma(int b, double c, RngStream& rng) {
  if (b != 1) throw input_error("draw_polya_gamma: only b = 1 is supported");
  if (!std::isfinite(c)) throw input_error("draw_polya_gamma: invalid tilt");
  return 0.25 * draw_jacobi_star(0.5 * std::fabs(c), rng);
}

double draw_truncated_normal(double mean, double sd, TruncationSide side,
                             RngStream& rng) {
  if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
    throw input_error("draw_truncated_normal: sd must be positive and finite");
  }
  if (side == TruncationSide::above_zero) {
    const double a = -mean / sd;
    while (true) {
      const double x = mean + sd * draw_std_normal_lower_tail(a, rng);
      if (x > 0.0) return x;  // re-draw if rounding landed on the boundary
    }
  }
  // x <= 0  <=>  -x >= 0 with -x ~ N(-mean, sd^2).
  const double a = mean / sd;
  while (true) {
    const double x = -(-mean + sd * draw_std_normal_lower_tail(a, rng));
    if (x <= 0.0) return x;
  }
}

double draw_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw input_error("draw_gamma: shape must be positive");
  }
  if (shape < 1.0) {
    const double g = draw_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = draw_std_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> draw_dirichlet(std::span<const double> alpha,
                                   RngStream& rng) {
  if (alpha.empty()) throw input_error("draw_dirichlet: empty alpha");
  std::vector<double> out(alpha.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) {
      throw input_error("draw_dirichlet: alpha must be positive");
    }
    out[i] = draw_gamma(alpha[i], rng);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> draw_mvn(std::span<const double> mean,
                             const Matrix& chol_lower, RngStream& rng) {
  const std::size_t k = mean.size();
  if (chol_lower.rows() != k || chol_lower.cols() != k) {
    throw input_error("draw_mvn: dimension mismatch");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(chol_lower(i, i) > 0.0)) {
      throw input_error("draw_mvn: factor diagonal must be positive");
    }
  }
  std::vector<double> z(k);
  for (double& v : z) v = draw_std_normal(rng);
  std::vector<double> out(mean.begin(), mean.end());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = j; i < k; ++i) out[i] += chol_lower(i, j) * z[j];
  }
  return out;
}

}  // namespace cwvsmix
