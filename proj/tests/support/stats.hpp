// Test-side statistical helpers: Monte-Carlo standard errors via influence
// functions and batch-means errors for autocorrelated chains. Kept independent
// of the library under test.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace testsupport {

inline double mean(std::span<const double> x) {
  double sum = 0.0;
  for (const double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

inline double sample_sd(std::span<const double> x) {
  const double mu = mean(x);
  double ss = 0.0;
  for (const double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

inline Estimate from_influence(std::span<const double> influence, double value) {
  const double sd = sample_sd(influence);
  return {value, sd / std::sqrt(static_cast<double>(influence.size()))};
}

inline Estimate mean_estimate(std::span<const double> x) {
  return {mean(x), sample_sd(x) / std::sqrt(static_cast<double>(x.size()))};
}

inline Estimate variance_estimate(std::span<const double> x) {
  const double mu = mean(x);
  double var = 0.0;
  for (const double v : x) var += (v - mu) * (v - mu);
  var /= static_cast<double>(x.size());
  std::vector<double> influence;
  influence.reserve(x.size());
  for (const double v : x) influence.push_back((v - mu) * (v - mu) - var);
  return from_influence(influence, var);
}

inline Estimate covariance_estimate(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  double cov = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) cov += (x[k] - mx) * (y[k] - my);
  cov /= static_cast<double>(x.size());
  std::vector<double> influence;
  influence.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    influence.push_back((x[k] - mx) * (y[k] - my) - cov);
  }
  return from_influence(influence, cov);
}

// Asymptotic se of the sample correlation via its influence function
// z_x z_y - rho/2 (z_x^2 + z_y^2).
inline Estimate correlation_estimate(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  double vx = 0.0;
  double vy = 0.0;
  double cov = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    vx += (x[k] - mx) * (x[k] - mx);
    vy += (y[k] - my) * (y[k] - my);
    cov += (x[k] - mx) * (y[k] - my);
  }
  const double n = static_cast<double>(x.size());
  vx /= n;
  vy /= n;
  cov /= n;
  const double rho = cov / std::sqrt(vx * vy);
  std::vector<double> influence;
  influence.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double zx = (x[k] - mx) / std::sqrt(vx);
    const double zy = (y[k] - my) / std::sqrt(vy);
    influence.push_back(zx * zy - 0.5 * rho * (zx * zx + zy * zy));
  }
  return from_influence(influence, rho);
}

// Standard error of the chain mean from non-overlapping batch means.
inline double batch_means_se(std::span<const double> chain, std::size_t batches = 100) {
  const std::size_t batch_size = chain.size() / batches;
  std::vector<double> batch_means;
  batch_means.reserve(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    batch_means.push_back(mean(chain.subspan(b * batch_size, batch_size)));
  }
  return sample_sd(batch_means) / std::sqrt(static_cast<double>(batches));
}

inline bool within_se(double estimate, double truth, double se, double multiple) {
  return std::abs(estimate - truth) <= multiple * se;
}

}  // namespace testsupport
