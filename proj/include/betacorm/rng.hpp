#pragma once

#include <cstdint>

namespace betacorm {

// Counter-based 64-bit generator (SplitMix64): output t is a bijective mix of
// seed + t * gamma, so a stream is fully determined by its seed and draws are
// reproducible bit-for-bit across platforms. substream() derives statistically
// independent streams for parallel chains or per-feature lanes.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double uniform() noexcept {
    for (;;) {
      const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  Rng substream(std::uint64_t id) const noexcept {
    return Rng(mix(state_ + (id + 1) * 0xbf58476d1ce4e5b9ULL));
  }

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~std::uint64_t{0}; }
  result_type operator()() noexcept { return next(); }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Clamp into [1e-300, 1 - 1e-16] so log(x) and log1p(-x) stay finite after
// floating underflow at the ends of (0,1).
double clamp_unit_open(double x) noexcept;

double sample_normal(Rng& rng) noexcept;

// Shape/rate parameterization. Marsaglia-Tsang with the shape<1 boost;
// exact (no approximation), so sampled laws can be tested against their cdfs.
double sample_gamma(Rng& rng, double shape, double rate);

// Two-gamma ratio, clamped into the open unit interval.
double sample_beta(Rng& rng, double alpha, double beta);

// Beta draw carrying its exact log. For tiny shapes the true log(m) can sit
// far below log(1e-300); the log component stays exact where the clamped
// linear value cannot, which the shape kernels rely on.
struct BetaLogDraw {
  double value;      // clamped into [1e-300, 1 - 1e-16]
  double log_value;  // exact, possibly far below -690
};
BetaLogDraw sample_beta_log(Rng& rng, double alpha, double beta);

bool sample_bernoulli(Rng& rng, double prob) noexcept;

}  // namespace betacorm
