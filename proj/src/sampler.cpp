#include "betacorm/sampler.hpp"

#include "betacorm/error.hpp"
#include "betacorm/math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace betacorm {

namespace {

constexpr double kTargetAcceptance = 0.44;
constexpr double kMinStep = 1e-4;
constexpr double kMaxStep = 10.0;
constexpr double kMaxLogValue = 690.0;  // keeps exp() and lgamma() finite

double clamp_init(double v) { return std::clamp(v, 1e-6, 1e6); }

double shape_for(const ChainState& state, const PriorConfig& config, Index i) {
  return config.per_feature_shapes() ? state.shapes[i] : state.shapes[0];
}

void adapt_log_step(double& step, double acceptance, std::uint64_t t) {
  const double gain = std::pow(static_cast<double>(t), -0.6);
  step = std::clamp(step * std::exp(gain * (acceptance - kTargetAcceptance)), kMinStep, kMaxStep);
}

// Shared random-walk-on-log-scale Metropolis step.
template <typename LogDensity>
bool metropolis_log_walk(double& value, double& step, LogDensity&& logpdf, Rng& rng,
                         AdaptControl adapt) {
  const double eta = std::log(value);
  const double eta_prime = std::clamp(eta + step * sample_normal(rng), -kMaxLogValue,
                                      kMaxLogValue);
  const double proposed = std::exp(eta_prime);
  // Jacobian of the log transform contributes value'/value to the ratio.
  const double log_ratio = logpdf(proposed) - logpdf(value) + (eta_prime - eta);
  double acceptance = 0.0;
  if (std::isfinite(log_ratio)) {
    acceptance = std::min(1.0, std::exp(log_ratio));
  } else if (log_ratio > 0.0) {
    acceptance = 1.0;
  }
  const bool accepted = std::log(rng.uniform()) < log_ratio;
  if (accepted) value = proposed;
  if (adapt.enabled) adapt_log_step(step, acceptance, adapt.step);
  return accepted;
}

}  // namespace

ChainState init_state(const GroupedBinaryMatrix& data, const PriorConfig& config,
                      std::uint64_t seed) {
  config.validate(data.num_features());
  if (config.q.size() != data.num_features()) {
    throw Error(ErrorKind::data, "config/data dimension mismatch");
  }
  const Index m_features = data.num_features();
  const Index d = data.num_groups();
  Rng rng(seed);

  ChainState state;
  state.mh_log_step = 0.5;
  state.phi_log_step = 0.5;
  state.c = config.c_fixed ? *config.c_fixed
                           : clamp_init(sample_gamma(rng, config.c_prior.shape, config.c_prior.rate));

  state.phi = config.phi;
  state.kappa = config.kappa;
  if (config.shapes_fixed) {
    state.shapes = *config.shapes_fixed;
    if (config.gamma_gamma()) state.alphas = Vector::Constant(m_features, config.kappa);
  } else {
    switch (config.shape_mode) {
      case ShapeMode::global_vague:
        state.shapes = Vector::Constant(
            1, clamp_init(sample_gamma(rng, config.a_prior.shape, config.a_prior.rate)));
        break;
      case ShapeMode::local_vague:
        state.shapes.resize(m_features);
        for (Index i = 0; i < m_features; ++i) {
          state.shapes[i] = clamp_init(sample_gamma(rng, config.a_prior.shape, config.a_prior.rate));
        }
        break;
      default: {
        if (config.phi_sampled()) {
          state.phi = clamp_init(sample_gamma(rng, config.hyper_prior.shape, config.hyper_prior.rate));
        }
        if (config.kappa_sampled()) {
          state.kappa =
              clamp_init(sample_gamma(rng, config.hyper_prior.shape, config.hyper_prior.rate));
        }
        state.alphas.resize(m_features);
        state.shapes.resize(m_features);
        for (Index i = 0; i < m_features; ++i) {
          state.alphas[i] = clamp_init(sample_gamma(rng, state.phi, state.kappa));
        }
        for (Index i = 0; i < m_features; ++i) {
          state.shapes[i] = clamp_init(sample_gamma(rng, config.lambda, state.alphas[i]));
        }
        break;
      }
    }
  }

  state.p.resize(m_features);
  for (Index i = 0; i < m_features; ++i) {
    state.p[i] = sample_beta(rng, state.c * config.q[i], state.c * (1.0 - config.q[i]));
  }
  state.m.resize(d, m_features);
  state.log_m.resize(d, m_features);
  for (Index i = 0; i < m_features; ++i) {
    const double a_i = shape_for(state, config, i);
    for (Index j = 0; j < d; ++j) {
      const BetaLogDraw draw = sample_beta_log(rng, a_i, 1.0);
      state.m(j, i) = draw.value;
      state.log_m(j, i) = draw.log_value;
    }
  }

  state.y = PackedBits(data.group_sizes, m_features);
  for (Index i = 0; i < m_features; ++i) {
    for (Index j = 0; j < d; ++j) {
      const Index begin = data.group_begin(j);
      const double m_ji = state.m(j, i);
      for (Index k = 0; k < data.group_sizes[static_cast<std::size_t>(j)]; ++k) {
        const bool forced = data.entries(begin + k, i) != 0;
        state.y.set(j, i, k, forced || sample_bernoulli(rng, m_ji));
      }
    }
  }
  return state;
}

void update_y(ChainState& state, const GroupedBinaryMatrix& data, Rng& rng) {
  const Index m_features = data.num_features();
  const Index d = data.num_groups();
  for (Index i = 0; i < m_features; ++i) {
    const double p = state.p[i];
    for (Index j = 0; j < d; ++j) {
      const double prob = slice_success_prob(p, state.m(j, i));
      const Index begin = data.group_begin(j);
      const Index n_j = data.group_sizes[static_cast<std::size_t>(j)];
      for (Index k = 0; k < n_j; ++k) {
        if (data.entries(begin + k, i) != 0) {
          state.y.set(j, i, k, true);
        } else {
          state.y.set(j, i, k, sample_bernoulli(rng, prob));
        }
      }
    }
  }
}

std::pair<double, double> p_conditional(const ChainState& state, const GroupedBinaryMatrix& data,
                                        const PriorConfig& config, Index i) {
  // x y sums to the column's ones; (1-x) y counts active slices at zero cells.
  Index ones = 0;
  Index slack = 0;
  for (Index j = 0; j < data.num_groups(); ++j) {
    ones += data.group_ones(j, i);
    slack += state.y.count(j, i) - data.group_ones(j, i);
  }
  return {static_cast<double>(ones) + state.c * config.q[i],
          static_cast<double>(slack) + state.c * (1.0 - config.q[i])};
}

void update_p(ChainState& state, const GroupedBinaryMatrix& data, const PriorConfig& config,
              Rng& rng) {
  for (Index i = 0; i < data.num_features(); ++i) {
    const auto [alpha, beta] = p_conditional(state, data, config, i);
    state.p[i] = sample_beta(rng, alpha, beta);
  }
}

std::pair<double, double> m_conditional(const ChainState& state, const GroupedBinaryMatrix& data,
                                        const PriorConfig& config, Index j, Index i) {
  const double a_i = shape_for(state, config, i);
  const double active = static_cast<double>(state.y.count(j, i));
  const double n_j = static_cast<double>(data.group_sizes[static_cast<std::size_t>(j)]);
  return {a_i + active, 1.0 + n_j - active};
}

void update_m(ChainState& state, const GroupedBinaryMatrix& data, const PriorConfig& config,
              Rng& rng) {
  for (Index i = 0; i < data.num_features(); ++i) {
    for (Index j = 0; j < data.num_groups(); ++j) {
      const auto [alpha, beta] = m_conditional(state, data, config, j, i);
      const BetaLogDraw draw = sample_beta_log(rng, alpha, beta);
      state.m(j, i) = draw.value;
      state.log_m(j, i) = draw.log_value;
    }
  }
}

double c_conditional_logpdf(double c, const Vector& p, const Vector& q, const GammaPrior& prior) {
  double lp = log_gamma_pdf(c, prior.shape, prior.rate);
  for (Index i = 0; i < p.size(); ++i) {
    const double a = c * q[i];
    const double b = c * (1.0 - q[i]);
    lp += (a - 1.0) * std::log(p[i]) + (b - 1.0) * std::log1p(-p[i]) - log_beta(a, b);
  }
  return lp;
}

bool update_c(ChainState& state, const PriorConfig& config, Rng& rng, AdaptControl adapt) {
  return metropolis_log_walk(
      state.c, state.mh_log_step,
      [&](double c) { return c_conditional_logpdf(c, state.p, config.q, config.c_prior); }, rng,
      adapt);
}

std::pair<double, double> a_global_conditional(const ChainState& state,
                                               const PriorConfig& config) {
  const double md = static_cast<double>(state.num_features() * state.num_groups());
  const double sum_log_m = state.log_m.sum();
  return {config.a_prior.shape + md, config.a_prior.rate - sum_log_m};
}

void update_a_global(ChainState& state, const PriorConfig& config, Rng& rng) {
  if (config.shape_mode != ShapeMode::global_vague) {
    throw Error(ErrorKind::usage, "update_a_global requires the global shape mode");
  }
  const auto [shape, rate] = a_global_conditional(state, config);
  state.shapes[0] = sample_gamma(rng, shape, rate);
}

std::pair<double, double> a_local_conditional(const ChainState& state, const PriorConfig& config,
                                              Index i) {
  const double sum_log_m = state.log_m.col(i).sum();
  const double d = static_cast<double>(state.num_groups());
  if (config.shape_mode == ShapeMode::local_vague) {
    return {config.a_prior.shape + d, config.a_prior.rate - sum_log_m};
  }
  return {config.lambda + d, state.alphas[i] - sum_log_m};
}

void update_a_local(ChainState& state, const PriorConfig& config, Rng& rng) {
  if (!config.per_feature_shapes()) {
    throw Error(ErrorKind::usage, "update_a_local requires a per-feature shape mode");
  }
  for (Index i = 0; i < state.num_features(); ++i) {
    const auto [shape, rate] = a_local_conditional(state, config, i);
    state.shapes[i] = sample_gamma(rng, shape, rate);
  }
}

std::pair<double, double> alpha_conditional(const ChainState& state, const PriorConfig& config,
                                            Index i) {
  return {config.lambda + state.phi, state.shapes[i] + state.kappa};
}

std::pair<double, double> kappa_conditional(const ChainState& state, const PriorConfig& config) {
  return {state.phi * static_cast<double>(state.num_features()) + config.hyper_prior.shape,
          state.alphas.sum() + config.hyper_prior.rate};
}

double phi_conditional_logpdf(double phi, const Vector& alphas, double kappa,
                              const GammaPrior& hyper) {
  const double m = static_cast<double>(alphas.size());
  double sum_log_alpha = 0.0;
  for (Index i = 0; i < alphas.size(); ++i) sum_log_alpha += std::log(alphas[i]);
  return m * (phi * std::log(kappa) - std::lgamma(phi)) + (phi - 1.0) * sum_log_alpha +
         log_gamma_pdf(phi, hyper.shape, hyper.rate);
}

bool update_gamma_gamma_hypers(ChainState& state, const PriorConfig& config, Rng& rng,
                               AdaptControl adapt) {
  if (!config.gamma_gamma()) {
    throw Error(ErrorKind::usage, "hyper update requires a gamma-gamma shape mode");
  }
  for (Index i = 0; i < state.num_features(); ++i) {
    const auto [shape, rate] = alpha_conditional(state, config, i);
    state.alphas[i] = sample_gamma(rng, shape, rate);
  }
  if (config.kappa_sampled()) {
    const auto [shape, rate] = kappa_conditional(state, config);
    state.kappa = sample_gamma(rng, shape, rate);
  }
  if (config.phi_sampled()) {
    return metropolis_log_walk(
        state.phi, state.phi_log_step,
        [&](double phi) {
          return phi_conditional_logpdf(phi, state.alphas, state.kappa, config.hyper_prior);
        },
        rng, adapt);
  }
  return true;
}

bool sweep(ChainState& state, const GroupedBinaryMatrix& data, const PriorConfig& config,
           Rng& rng, AdaptControl adapt) {
  update_y(state, data, rng);
  update_p(state, data, config, rng);
  update_m(state, data, config, rng);
  if (!config.shapes_fixed) {
    if (config.shape_mode == ShapeMode::global_vague) {
      update_a_global(state, config, rng);
    } else {
      update_a_local(state, config, rng);
    }
  }
  if (config.gamma_gamma()) update_gamma_gamma_hypers(state, config, rng, adapt);
  if (config.c_fixed) return true;
  return update_c(state, config, rng, adapt);
}

PosteriorSamples run_chain(const GroupedBinaryMatrix& data, const PriorConfig& config,
                           const Schedule& schedule) {
  if (schedule.iterations == 0 || schedule.burn_in >= schedule.iterations) {
    throw Error(ErrorKind::usage, "burn-in must be smaller than the iteration count");
  }
  if (schedule.thinning < 1) throw Error(ErrorKind::usage, "thinning must be >= 1");

  ChainState state = init_state(data, config, schedule.seed);
  Rng rng = Rng(schedule.seed).substream(1);

  PosteriorSamples samples;
  samples.draws.reserve(
      static_cast<std::size_t>((schedule.iterations - schedule.burn_in) / schedule.thinning));
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;

  for (std::uint64_t t = 1; t <= schedule.iterations; ++t) {
    const bool adapting = t <= schedule.burn_in;
    const bool accepted = sweep(state, data, config, rng, AdaptControl{adapting, t});
    if (t > schedule.burn_in && !config.c_fixed) {
      ++proposals;
      accepts += accepted ? 1 : 0;
    }
    if (t > schedule.burn_in && (t - schedule.burn_in) % schedule.thinning == 0) {
      if (!std::isfinite(state.c) || !state.shapes.allFinite()) {
        throw Error(ErrorKind::numeric, "chain diverged at iteration " + std::to_string(t));
      }
      Draw draw;
      draw.iter = t;
      draw.c = state.c;
      draw.shapes = state.shapes;
      draw.p = state.p;
      draw.m = state.m;
      draw.alphas = state.alphas;
      draw.phi = state.phi;
      draw.kappa = state.kappa;
      samples.draws.push_back(std::move(draw));
    }
  }

  samples.meta.iterations = schedule.iterations;
  samples.meta.burn_in = schedule.burn_in;
  samples.meta.thinning = schedule.thinning;
  samples.meta.seed = schedule.seed;
  samples.meta.shape_mode = config.shape_mode;
  if (proposals > 0) {
    samples.meta.c_accept_rate = static_cast<double>(accepts) / static_cast<double>(proposals);
  }
  return samples;
}

double log_unnormalized_posterior(const ChainState& state, const GroupedBinaryMatrix& data,
                                  const PriorConfig& config) {
  const Index m_features = data.num_features();
  const Index d = data.num_groups();
  double lp = 0.0;

  if (!config.c_fixed) lp += log_gamma_pdf(state.c, config.c_prior.shape, config.c_prior.rate);
  if (!config.shapes_fixed) {
    switch (config.shape_mode) {
      case ShapeMode::global_vague:
        lp += log_gamma_pdf(state.shapes[0], config.a_prior.shape, config.a_prior.rate);
        break;
      case ShapeMode::local_vague:
        for (Index i = 0; i < m_features; ++i) {
          lp += log_gamma_pdf(state.shapes[i], config.a_prior.shape, config.a_prior.rate);
        }
        break;
      default:
        for (Index i = 0; i < m_features; ++i) {
          lp += log_gamma_pdf(state.shapes[i], config.lambda, state.alphas[i]);
          lp += log_gamma_pdf(state.alphas[i], state.phi, state.kappa);
        }
        if (config.kappa_sampled()) {
          lp += log_gamma_pdf(state.kappa, config.hyper_prior.shape, config.hyper_prior.rate);
        }
        if (config.phi_sampled()) {
          lp += log_gamma_pdf(state.phi, config.hyper_prior.shape, config.hyper_prior.rate);
        }
        break;
    }
  }

  for (Index i = 0; i < m_features; ++i) {
    lp += log_beta_pdf(state.p[i], state.c * config.q[i], state.c * (1.0 - config.q[i]));
    const double a_i = shape_for(state, config, i);
    const double log_p = std::log(state.p[i]);
    const double log_1mp = std::log1p(-state.p[i]);
    for (Index j = 0; j < d; ++j) {
      // beta(a, 1) score density: a m^{a-1}, with the exact log score.
      const double log_m = state.log_m(j, i);
      lp += std::log(a_i) + (a_i - 1.0) * log_m;
      const double log_1mm = std::log1p(-state.m(j, i));
      const Index begin = data.group_begin(j);
      for (Index k = 0; k < data.group_sizes[static_cast<std::size_t>(j)]; ++k) {
        const bool x = data.entries(begin + k, i) != 0;
        const bool y = state.y.get(j, i, k);
        if (x && !y) return -std::numeric_limits<double>::infinity();
        lp += y ? log_m : log_1mm;
        if (y) lp += x ? log_p : log_1mp;
      }
    }
  }
  return lp;
}

}  // namespace betacorm
