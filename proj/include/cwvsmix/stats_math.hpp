#pragma once

// Scalar special functions shared by the samplers and the engine's
// log-space targets.

namespace cwvsmix::stats {

// Standard normal CDF via erfc.
double norm_cdf(double x);

// log Phi(x), stable far into the left tail (asymptotic Mills-ratio series
// below x = -35 where erfc would leave the normal range).
double log_norm_cdf(double x);

// Standard normal quantile (Wichura's AS 241, double precision).
// Requires p in (0, 1).
double norm_quantile(double p);

// log(1 + e^x) without overflow.
double log1pexp(double x);

}  // namespace cwvsmix::stats
