#pragma once

#include "betacorm/prior.hpp"
#include "betacorm/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace betacorm {

// Slice indicators y_kji packed one bit per cell. Blocks are keyed by
// (feature, group) with each group padded to whole 64-bit words, so per-block
// counts reduce to popcounts and memory stays O(N*M) bits.
class PackedBits {
 public:
  PackedBits() = default;
  PackedBits(const std::vector<Index>& group_sizes, Index num_features);

  bool get(Index j, Index i, Index k) const {
    const auto& w = words_[word_index(j, i, k)];
    return (w >> (k & 63)) & 1u;
  }

  void set(Index j, Index i, Index k, bool value) {
    auto& w = words_[word_index(j, i, k)];
    const std::uint64_t bit = std::uint64_t{1} << (k & 63);
    w = value ? (w | bit) : (w & ~bit);
  }

  // Popcount over the (group, feature) block. Padding bits are never set.
  Index count(Index j, Index i) const;

  bool empty() const { return words_.empty(); }
  Index num_features() const { return num_features_; }

  friend bool operator==(const PackedBits&, const PackedBits&) = default;

 private:
  std::size_t word_index(Index j, Index i, Index k) const {
    return static_cast<std::size_t>(i * words_per_feature_ +
                                    group_word_begin_[static_cast<std::size_t>(j)] + (k >> 6));
  }

  std::vector<std::uint64_t> words_;
  std::vector<Index> group_word_begin_;  // word offset of each group within a feature
  std::vector<Index> group_words_;       // words per group
  Index words_per_feature_ = 0;
  Index num_features_ = 0;
};

// One complete MCMC state. All continuous values live strictly inside their
// open domains; y is 1 wherever the data is 1.
//
// The scores are carried twice: m holds the clamped linear values used for
// probability arithmetic, log_m the exact log-domain values. For very small
// shapes the true log score drops far below what a double in (0,1) can
// represent, and the shape kernels depend on those exact logs.
struct ChainState {
  Vector p;           // M jumps in (0,1)
  Matrix m;           // d x M scores in (0,1)
  Matrix log_m;       // d x M exact log scores, strictly negative
  PackedBits y;       // slice indicators
  double c = 1.0;     // concentration
  Vector shapes;      // length 1 (global mode) or M
  Vector alphas;      // length M in gamma-gamma modes, else empty
  double phi = 1.0;
  double kappa = 1.0;
  double mh_log_step = 0.5;   // proposal sd of the random walk on log c
  double phi_log_step = 0.5;  // proposal sd of the random walk on log phi

  Index num_features() const { return p.size(); }
  Index num_groups() const { return m.rows(); }

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

// Thinned snapshot: everything but the latent y.
struct Draw {
  std::uint64_t iter = 0;
  double c = 0.0;
  Vector shapes;
  Vector p;
  Matrix m;
  Vector alphas;  // kept in memory; not part of the persisted schema
  double phi = 1.0;
  double kappa = 1.0;
};

struct ChainMeta {
  std::uint64_t iterations = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  std::uint64_t seed = 0;
  ShapeMode shape_mode = ShapeMode::global_vague;
  std::optional<double> c_accept_rate;  // post burn-in; empty when c is fixed
  std::string config_hash;
};

struct PosteriorSamples {
  std::vector<Draw> draws;
  ChainMeta meta;

  Index num_features() const { return draws.empty() ? 0 : draws.front().p.size(); }
  Index num_groups() const { return draws.empty() ? 0 : draws.front().m.rows(); }
};

// Delimited text, one header line then one row per retained draw with 17
// significant digits. Columns: iter, c, a or a_1..a_M, p_1..p_M,
// m_1_1..m_d_M (group-major), then phi and kappa in gamma-gamma modes.
// A JSON sidecar <path>.meta.json stores the schedule, seed, mode and
// acceptance rate.
void save_samples(const PosteriorSamples& samples, const std::filesystem::path& path);
PosteriorSamples load_samples(const std::filesystem::path& path);

struct CredibleRow {
  std::string param;
  double lower = 0.0;
  double median = 0.0;
  double upper = 0.0;
};

// Empirical ((1-level)/2, 0.5, 1-(1-level)/2) quantiles per scalar parameter
// (c, the shape(s), and phi/kappa where applicable). Requires >= 2 draws.
std::vector<CredibleRow> summarize_credible(const PosteriorSamples& samples, double level);

}  // namespace betacorm
