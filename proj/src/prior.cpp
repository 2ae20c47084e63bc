#include "betacorm/prior.hpp"

#include "betacorm/error.hpp"

#include <cmath>
#include <vector>

namespace betacorm {

std::string to_string(ShapeMode mode) {
  switch (mode) {
    case ShapeMode::global_vague: return "global";
    case ShapeMode::local_vague: return "local";
    case ShapeMode::obj_lomax: return "obj-lomax";
    case ShapeMode::lomax: return "lomax";
    case ShapeMode::half_cauchy: return "half-cauchy";
  }
  throw Error(ErrorKind::usage, "unknown shape mode");
}

ShapeMode shape_mode_from_string(const std::string& name) {
  if (name == "global") return ShapeMode::global_vague;
  if (name == "local") return ShapeMode::local_vague;
  if (name == "obj-lomax") return ShapeMode::obj_lomax;
  if (name == "lomax") return ShapeMode::lomax;
  if (name == "half-cauchy") return ShapeMode::half_cauchy;
  throw Error(ErrorKind::usage, "unknown shape mode '" + name +
                                    "' (expected global|local|obj-lomax|lomax|half-cauchy)");
}

void PriorConfig::apply_mode_constraints() {
  switch (shape_mode) {
    case ShapeMode::obj_lomax:
      lambda = 1.0;
      phi = 1.0;
      kappa = 1.0;
      break;
    case ShapeMode::lomax:
      lambda = 1.0;
      break;
    case ShapeMode::half_cauchy:
      lambda = 0.5;
      phi = 0.5;
      break;
    default:
      break;
  }
}

void PriorConfig::validate(Index num_features) const {
  std::vector<std::string> violations;

  if (num_features >= 0 && q.size() != num_features) {
    violations.push_back("q has length " + std::to_string(q.size()) + ", expected " +
                         std::to_string(num_features));
  }
  for (Index i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0.0) || !(q[i] < 1.0)) {
      violations.push_back("q[" + std::to_string(i + 1) + "] not strictly in (0,1)");
      break;
    }
  }
  auto check_pos = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      violations.push_back(std::string(name) + " must be strictly positive");
    }
  };
  check_pos(c_prior.shape, "c prior shape");
  check_pos(c_prior.rate, "c prior rate");
  check_pos(a_prior.shape, "shape prior shape");
  check_pos(a_prior.rate, "shape prior rate");
  check_pos(hyper_prior.shape, "hyperprior shape");
  check_pos(hyper_prior.rate, "hyperprior rate");
  check_pos(lambda, "lambda");
  check_pos(phi, "phi");
  check_pos(kappa, "kappa");
  if (!(x0 > 0.0) || !(x0 < 1.0)) violations.push_back("x0 not strictly in (0,1)");

  if (shape_mode == ShapeMode::obj_lomax && (lambda != 1.0 || phi != 1.0 || kappa != 1.0)) {
    violations.push_back("obj-lomax requires lambda = phi = kappa = 1");
  }
  if (shape_mode == ShapeMode::lomax && lambda != 1.0) {
    violations.push_back("lomax requires lambda = 1");
  }
  if (shape_mode == ShapeMode::half_cauchy && (lambda != 0.5 || phi != 0.5)) {
    violations.push_back("half-cauchy requires lambda = phi = 0.5");
  }

  if (c_fixed && !(*c_fixed > 0.0)) violations.push_back("fixed c must be positive");
  if (shapes_fixed) {
    if (num_features >= 0) {
      const Index want = per_feature_shapes() ? num_features : 1;
      if (shapes_fixed->size() != want) {
        violations.push_back("fixed shapes must have length " + std::to_string(want));
      }
    }
    for (Index i = 0; i < shapes_fixed->size(); ++i) {
      if (!((*shapes_fixed)[i] > 0.0)) {
        violations.push_back("fixed shapes must be positive");
        break;
      }
    }
  }

  if (!violations.empty()) throw ValidationError(std::move(violations));
}

PriorConfig PriorConfig::uniform(Index num_features, double qbar) {
  PriorConfig config;
  config.q = Vector::Constant(num_features, qbar);
  return config;
}

}  // namespace betacorm
