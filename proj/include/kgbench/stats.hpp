#pragma once

#include <vector>

namespace kgbench {

double mean(const std::vector<double>& values);

// Sample standard deviation (n - 1 denominator).
double sample_stddev(const std::vector<double>& values);

// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double a, double b, double x);

// CDF of Student's t distribution with df degrees of freedom.
double student_t_cdf(double t, double df);

// Quantile of Student's t distribution, solved numerically from the CDF.
double t_quantile(double p, double df);

// Two-sided confidence-interval half width: t_{(1+level)/2, n-1} * sd / sqrt(n).
double ci_half_width(double stddev, std::size_t n, double level = 0.95);

}  // namespace kgbench
