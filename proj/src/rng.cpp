#include "betacorm/rng.hpp"

#include "betacorm/error.hpp"

#include <cmath>

namespace betacorm {

double clamp_unit_open(double x) noexcept {
  if (x < 1e-300) return 1e-300;
  if (x > 1.0 - 1e-16) return 1.0 - 1e-16;
  return x;
}

double sample_normal(Rng& rng) noexcept {
  // Box-Muller without the cached spare: two uniforms per variate keeps the
  // draw sequence a pure function of the stream position.
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

namespace {

struct GammaLogDraw {
  double value;      // may underflow to 0 for tiny shapes
  double log_value;  // exact
};

GammaLogDraw sample_standard_gamma_log(Rng& rng, double shape) {
  if (shape < 1.0) {
    // Boost: G(k) = G(k+1) * U^{1/k}; the log form survives the underflow.
    const GammaLogDraw g = sample_standard_gamma_log(rng, shape + 1.0);
    const double log_boost = std::log(rng.uniform()) / shape;
    return {g.value * std::exp(log_boost), g.log_value + log_boost};
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return {d * v, std::log(d) + std::log(v)};
    }
  }
}

double sample_standard_gamma(Rng& rng, double shape) {
  return sample_standard_gamma_log(rng, shape).value;
}

}  // namespace

double sample_gamma(Rng& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw Error(ErrorKind::numeric, "gamma sampler requires positive shape and rate");
  }
  double g = sample_standard_gamma(rng, shape) / rate;
  if (g < 1e-300) g = 1e-300;  // keep log(g) finite after underflow
  return g;
}

BetaLogDraw sample_beta_log(Rng& rng, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorKind::numeric, "beta sampler requires positive parameters");
  }
  const GammaLogDraw ga = sample_standard_gamma_log(rng, alpha);
  const GammaLogDraw gb = sample_standard_gamma_log(rng, beta);
  // log m = log Ga - log(Ga + Gb), evaluated from the exact gamma logs.
  const double delta = ga.log_value - gb.log_value;
  double log_m;
  if (delta >= 0.0) {
    log_m = -std::log1p(std::exp(-delta));
  } else {
    log_m = delta - std::log1p(std::exp(delta));
  }
  log_m = std::min(log_m, -1e-300);  // keep the log strictly negative
  return {clamp_unit_open(std::exp(log_m)), log_m};
}

double sample_beta(Rng& rng, double alpha, double beta) {
  return sample_beta_log(rng, alpha, beta).value;
}

bool sample_bernoulli(Rng& rng, double prob) noexcept {
  return rng.uniform() < prob;
}

}  // namespace betacorm
