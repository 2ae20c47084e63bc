#pragma once

#include "betacorm/types.hpp"

#include <optional>
#include <string>

namespace betacorm {

// Prior structure on the score shape parameter(s).
//   global_vague : single a ~ gamma(a_prior)
//   local_vague  : a_i iid gamma(a_prior)
//   obj_lomax    : a_i ~ gamma(lambda, alpha_i), alpha_i ~ gamma(phi, kappa),
//                  lambda = phi = kappa = 1 fixed
//   lomax        : lambda = 1 fixed, phi and kappa sampled
//   half_cauchy  : lambda = phi = 0.5 fixed, kappa sampled
enum class ShapeMode { global_vague, local_vague, obj_lomax, lomax, half_cauchy };

std::string to_string(ShapeMode mode);
ShapeMode shape_mode_from_string(const std::string& name);

struct GammaPrior {
  double shape = 0.1;
  double rate = 0.1;
};

struct PriorConfig {
  Vector q;                          // M base weights, each strictly in (0,1)
  GammaPrior c_prior{0.1, 0.1};      // concentration c
  ShapeMode shape_mode = ShapeMode::global_vague;
  GammaPrior a_prior{0.1, 0.1};      // global: prior on a; local_vague: prior on each a_i
  double lambda = 1.0;               // gamma-gamma: a_i ~ gamma(lambda, alpha_i)
  double phi = 1.0;                  // gamma-gamma: alpha_i ~ gamma(phi, kappa)
  double kappa = 1.0;
  GammaPrior hyper_prior{0.1, 0.1};  // vague prior on kappa (and on phi when sampled)
  double x0 = 1e-5;                  // spike cut point, used only for slab summaries

  // Fixed overrides: skip the prior draw / posterior update of c or the shapes.
  std::optional<double> c_fixed;
  std::optional<Vector> shapes_fixed;

  bool per_feature_shapes() const { return shape_mode != ShapeMode::global_vague; }
  bool gamma_gamma() const {
    return shape_mode == ShapeMode::obj_lomax || shape_mode == ShapeMode::lomax ||
           shape_mode == ShapeMode::half_cauchy;
  }
  bool phi_sampled() const { return shape_mode == ShapeMode::lomax; }
  bool kappa_sampled() const {
    return shape_mode == ShapeMode::lomax || shape_mode == ShapeMode::half_cauchy;
  }

  // Pins (lambda, phi, kappa) to the values the mode fixes.
  void apply_mode_constraints();

  // Throws ValidationError listing every violation; M < 0 skips the q-length check.
  void validate(Index num_features = -1) const;

  static PriorConfig uniform(Index num_features, double qbar = 0.5);
};

}  // namespace betacorm
