#pragma once

#include <cstddef>
#include <vector>

namespace causalkit::stats {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile (inverse CDF), p in (0, 1).
double normal_quantile(double p);

// Regularized incomplete beta function I_x(a, b), x in [0, 1], a, b > 0.
double regularized_incomplete_beta(double a, double b, double x);

// CDF of the F distribution with (d1, d2) degrees of freedom at x >= 0.
double f_cdf(double x, double d1, double d2);

double mean(const std::vector<double>& xs);

// Unbiased sample variance; requires at least two values.
double variance(const std::vector<double>& xs);

}  // namespace causalkit::stats
