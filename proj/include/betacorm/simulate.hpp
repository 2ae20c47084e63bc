#pragma once

#include "betacorm/chain.hpp"
#include "betacorm/matrix.hpp"
#include "betacorm/prior.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace betacorm {

struct ForwardSimulation {
  GroupedBinaryMatrix data;
  ChainState truth;  // the generating state, including the slice indicators
};

// Generative draw of the full hierarchy: c and the shape hierarchy from their
// priors (or the fixed overrides in `config`), p_i ~ beta(c q_i, c(1-q_i)),
// m_ji ~ beta(a_i, 1), then the augmented pair y_kji ~ Ber(m_ji),
// x_kji ~ Ber(y_kji p_i), which leaves x ~ Ber(m_ji p_i) marginally.
// Same seed, same build => bit-identical output.
ForwardSimulation forward_simulate(const PriorConfig& config,
                                   const std::vector<Index>& group_sizes, std::uint64_t seed,
                                   std::vector<std::string> group_labels = {},
                                   std::vector<std::string> feature_labels = {});

// New observations from an existing generating state (shared p and m), e.g. a
// test set drawn with the same parameters as the training set.
GroupedBinaryMatrix simulate_from_state(const ChainState& truth,
                                        const std::vector<Index>& group_sizes,
                                        std::uint64_t seed,
                                        std::vector<std::string> group_labels = {},
                                        std::vector<std::string> feature_labels = {});

}  // namespace betacorm
