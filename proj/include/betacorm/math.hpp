#pragma once

#include <span>
#include <vector>

namespace betacorm {

double log_beta(double a, double b);

// log density of beta(a, b) at x in (0,1).
double log_beta_pdf(double x, double a, double b);

// log density of gamma(shape, rate) at x > 0.
double log_gamma_pdf(double x, double shape, double rate);

// Empirical quantile by linear interpolation of order statistics
// (h = (n-1) q). `sorted` must be ascending and nonempty.
double quantile_linear(std::span<const double> sorted, double q);

}  // namespace betacorm
