#pragma once

#include "betacorm/chain.hpp"
#include "betacorm/matrix.hpp"

#include <span>
#include <vector>

namespace betacorm {

// Posterior-predictive feature probabilities per group, plus the class priors
// used for classification.
struct PredictiveProfile {
  Matrix theta;         // d x M, each entry in (0,1)
  Vector group_priors;  // d simplex weights
};

enum class PriorWeighting { empirical, uniform };

// theta_ji = posterior mean of m_ji * p_i over the retained draws (the mean of
// per-draw products, not the product of means).
PredictiveProfile predictive_profile(const PosteriorSamples& samples,
                                     const GroupedBinaryMatrix& data,
                                     PriorWeighting weighting = PriorWeighting::empirical);

struct Classification {
  Index group = 0;       // argmax, ties to the lowest index
  Vector log_scores;     // d values
};

// Bernoulli log-likelihood plus log prior per group, over all features or the
// given subset:
//   score_j = log prior_j + sum_i [x_i log theta_ji + (1-x_i) log(1-theta_ji)].
Classification classify(const Eigen::Ref<const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>>& x,
                        const PredictiveProfile& profile, std::span<const Index> subset = {});

// Predicted group per row of `data`.
std::vector<Index> classify_rows(const GroupedBinaryMatrix& data, const PredictiveProfile& profile,
                                 std::span<const Index> subset = {});

// Fraction of rows whose predicted group matches their block.
double classification_accuracy(const GroupedBinaryMatrix& data, const PredictiveProfile& profile,
                               std::span<const Index> subset = {});

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;  // macro averaged, one-vs-rest
  double recall = 0.0;
  double f1 = 0.0;
};

Metrics evaluate_metrics(std::span<const Index> predicted, std::span<const Index> truth,
                         Index num_groups);

// Root-mean-square difference of the flattened theta matrices.
double profile_distance(const PredictiveProfile& a, const PredictiveProfile& b);

}  // namespace betacorm
