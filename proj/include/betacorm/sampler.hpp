#pragma once

#include "betacorm/chain.hpp"
#include "betacorm/matrix.hpp"
#include "betacorm/prior.hpp"
#include "betacorm/rng.hpp"

#include <cstdint>
#include <utility>

namespace betacorm {

struct Schedule {
  std::uint64_t iterations = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  std::uint64_t seed = 0;
};

// Robbins-Monro control for the random-walk kernels: when enabled, the log
// proposal step is nudged toward 0.44 acceptance with gain step^-0.6.
// Adaptation runs during burn-in only so the post burn-in kernel is Markovian.
struct AdaptControl {
  bool enabled = false;
  std::uint64_t step = 1;
};

ChainState init_state(const GroupedBinaryMatrix& data, const PriorConfig& config,
                      std::uint64_t seed);

// Slice indicators: y = 1 a.s. where x = 1, else Ber((1-p)m / (1-pm)).
void update_y(ChainState& state, const GroupedBinaryMatrix& data, Rng& rng);

// p_i ~ beta(sum x y + c q_i, sum (1-x) y + c(1-q_i)).
void update_p(ChainState& state, const GroupedBinaryMatrix& data, const PriorConfig& config,
              Rng& rng);

// m_ji ~ beta(a_i + sum_k y, 1 + n_j - sum_k y).
void update_m(ChainState& state, const GroupedBinaryMatrix& data, const PriorConfig& config,
              Rng& rng);

// Adaptive random walk on log c against the product-beta conditional times the
// gamma prior. Returns whether the proposal was accepted.
bool update_c(ChainState& state, const PriorConfig& config, Rng& rng, AdaptControl adapt = {});

// a ~ gamma(lambda + M d, alpha - sum log m). Global mode only.
void update_a_global(ChainState& state, const PriorConfig& config, Rng& rng);

// a_i ~ gamma(prior_shape + d, prior_rate_i - sum_j log m_ji), with the prior
// per mode (fixed (alpha, beta) in local-vague, (lambda, alpha_i) otherwise).
void update_a_local(ChainState& state, const PriorConfig& config, Rng& rng);

// Gamma-gamma hierarchy: alpha_i ~ gamma(lambda + phi, a_i + kappa), then
// kappa ~ gamma(phi M + s0, sum alpha + r0) where sampled, then the
// random-walk update of phi in lomax mode. Returns whether the phi proposal
// was accepted (true when phi is fixed).
bool update_gamma_gamma_hypers(ChainState& state, const PriorConfig& config, Rng& rng,
                               AdaptControl adapt = {});

// One full Gibbs scan in fixed order: y, p, m, shapes, hypers, c.
// Returns whether the c proposal was accepted (true when c is fixed).
bool sweep(ChainState& state, const GroupedBinaryMatrix& data, const PriorConfig& config,
           Rng& rng, AdaptControl adapt = {});

PosteriorSamples run_chain(const GroupedBinaryMatrix& data, const PriorConfig& config,
                           const Schedule& schedule);

// Log of the augmented joint density (data, latents, parameters, hyperpriors),
// up to the constant terms of fixed quantities; -inf if a latent contradicts
// the data (y = 0 where x = 1).
double log_unnormalized_posterior(const ChainState& state, const GroupedBinaryMatrix& data,
                                  const PriorConfig& config);

// Conditional-law parameters, exposed so the stated distributions can be
// checked directly against the kernels that sample them.
std::pair<double, double> p_conditional(const ChainState& state, const GroupedBinaryMatrix& data,
                                        const PriorConfig& config, Index i);
std::pair<double, double> m_conditional(const ChainState& state, const GroupedBinaryMatrix& data,
                                        const PriorConfig& config, Index j, Index i);
std::pair<double, double> a_global_conditional(const ChainState& state, const PriorConfig& config);
std::pair<double, double> a_local_conditional(const ChainState& state, const PriorConfig& config,
                                              Index i);
std::pair<double, double> alpha_conditional(const ChainState& state, const PriorConfig& config,
                                            Index i);
std::pair<double, double> kappa_conditional(const ChainState& state, const PriorConfig& config);

// Unnormalized log conditional density of c given the jumps.
double c_conditional_logpdf(double c, const Vector& p, const Vector& q, const GammaPrior& prior);

// Unnormalized log conditional density of phi given the alphas and kappa.
double phi_conditional_logpdf(double phi, const Vector& alphas, double kappa,
                              const GammaPrior& hyper);

// Success probability of the slice indicator at a zero cell: (1-p)m / (1-pm).
inline double slice_success_prob(double p, double m) {
  return (1.0 - p) * m / (1.0 - p * m);
}

}  // namespace betacorm
