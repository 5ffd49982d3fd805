#pragma once

#include <string>
#include <vector>

#include "cwvsmix/linalg.hpp"
#include "cwvsmix/weights.hpp"

namespace cwvsmix {

// Per-(pollutant, period) centering/scale used to standardize exposures,
// kept so effect interpretations can be mapped back to raw units.
struct ScalingInfo {
  bool applied = false;
  Matrix median;  // q x m
  Matrix iqr;     // q x m
};

struct ExposureDataset {
  std::vector<int> y;   // binary outcomes
  Matrix x;             // n x p covariates, first column the intercept
  ExposureTensor z;     // n x m x q exposures
  ScalingInfo scaling;
  std::vector<std::string> pollutant_names;  // length q
  std::vector<std::string> covariate_names;  // length p

  std::size_t n() const { return y.size(); }
  std::size_t p() const { return x.cols(); }
  std::size_t m() const { return z.m; }
  std::size_t q() const { return z.q; }
};

// Type-7 quantile (linear interpolation between order statistics) on a copy.
double quantile_type7(std::vector<double> values, double p);

// Standardizes each (pollutant, period) slice to median 0 / IQR 1 in place
// and returns the scaling metadata.  A zero-IQR slice is an error naming the
// offending slice.
ScalingInfo iqr_standardize(ExposureTensor& z,
                            const std::vector<std::string>& pollutant_names);

struct Priors {
  double sigma2_beta = 1e4;  // variance of beta_j ~ N(0, sigma2_beta)
  double alpha_phi = 1.0;    // Gamma shape for phi_lambda, phi_1, phi_2
  double beta_phi = 1.0;     // Gamma rate
  double sigma2_A = 1.0;     // variance for A21 and for ln A11, ln A22
};

}  // namespace cwvsmix
