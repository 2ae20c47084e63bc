#include "betacorm/simulate.hpp"

#include "betacorm/error.hpp"
#include "betacorm/rng.hpp"

namespace betacorm {

namespace {

std::vector<std::string> default_labels(const char* prefix, Index count,
                                        std::vector<std::string> given) {
  if (!given.empty()) return given;
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) labels.push_back(prefix + std::to_string(k + 1));
  return labels;
}

GroupedBinaryMatrix sample_observations(const ChainState& truth,
                                        const std::vector<Index>& group_sizes, Rng& rng,
                                        std::vector<std::string> group_labels,
                                        std::vector<std::string> feature_labels,
                                        PackedBits* y_out) {
  const Index m_features = truth.num_features();
  const Index d = static_cast<Index>(group_sizes.size());
  Index total = 0;
  for (const Index n : group_sizes) total += n;

  BinaryMatrix entries = BinaryMatrix::Zero(total, m_features);
  std::vector<Index> offsets(group_sizes.size() + 1, 0);
  for (std::size_t j = 0; j < group_sizes.size(); ++j) {
    offsets[j + 1] = offsets[j] + group_sizes[j];
  }

  for (Index i = 0; i < m_features; ++i) {
    const double p = truth.p[i];
    for (Index j = 0; j < d; ++j) {
      const double m = truth.m(j, i);
      for (Index k = 0; k < group_sizes[static_cast<std::size_t>(j)]; ++k) {
        const bool y = sample_bernoulli(rng, m);
        const bool x = y && sample_bernoulli(rng, p);
        if (y && y_out != nullptr) y_out->set(j, i, k, true);
        entries(offsets[static_cast<std::size_t>(j)] + k, i) = x ? 1 : 0;
      }
    }
  }
  return validate_matrix(entries, group_sizes,
                         default_labels("g", d, std::move(group_labels)),
                         default_labels("f", m_features, std::move(feature_labels)));
}

}  // namespace

ForwardSimulation forward_simulate(const PriorConfig& config,
                                   const std::vector<Index>& group_sizes, std::uint64_t seed,
                                   std::vector<std::string> group_labels,
                                   std::vector<std::string> feature_labels) {
  const Index m_features = config.q.size();
  config.validate(m_features);
  if (group_sizes.empty()) throw Error(ErrorKind::data, "at least one group is required");
  for (const Index n : group_sizes) {
    if (n < 1) throw Error(ErrorKind::data, "every group needs at least one observation");
  }
  const Index d = static_cast<Index>(group_sizes.size());

  Rng rng(seed);
  ChainState truth;
  truth.c = config.c_fixed ? *config.c_fixed : sample_gamma(rng, config.c_prior.shape,
                                                            config.c_prior.rate);

  // Shape hierarchy, in fixed draw order: phi, kappa, alphas, shapes.
  truth.phi = config.phi;
  truth.kappa = config.kappa;
  if (config.shapes_fixed) {
    truth.shapes = *config.shapes_fixed;
    if (!config.per_feature_shapes() && truth.shapes.size() != 1) {
      throw Error(ErrorKind::data, "global mode expects a single fixed shape");
    }
  } else {
    switch (config.shape_mode) {
      case ShapeMode::global_vague:
        truth.shapes = Vector::Constant(1, sample_gamma(rng, config.a_prior.shape,
                                                        config.a_prior.rate));
        break;
      case ShapeMode::local_vague:
        truth.shapes.resize(m_features);
        for (Index i = 0; i < m_features; ++i) {
          truth.shapes[i] = sample_gamma(rng, config.a_prior.shape, config.a_prior.rate);
        }
        break;
      default: {
        if (config.phi_sampled()) {
          truth.phi = sample_gamma(rng, config.hyper_prior.shape, config.hyper_prior.rate);
        }
        if (config.kappa_sampled()) {
          truth.kappa = sample_gamma(rng, config.hyper_prior.shape, config.hyper_prior.rate);
        }
        truth.alphas.resize(m_features);
        truth.shapes.resize(m_features);
        for (Index i = 0; i < m_features; ++i) {
          truth.alphas[i] = sample_gamma(rng, truth.phi, truth.kappa);
        }
        for (Index i = 0; i < m_features; ++i) {
          truth.shapes[i] = sample_gamma(rng, config.lambda, truth.alphas[i]);
        }
        break;
      }
    }
  }

  truth.p.resize(m_features);
  for (Index i = 0; i < m_features; ++i) {
    truth.p[i] = sample_beta(rng, truth.c * config.q[i], truth.c * (1.0 - config.q[i]));
  }
  truth.m.resize(d, m_features);
  truth.log_m.resize(d, m_features);
  for (Index i = 0; i < m_features; ++i) {
    const double a_i = config.per_feature_shapes() ? truth.shapes[i] : truth.shapes[0];
    for (Index j = 0; j < d; ++j) {
      const BetaLogDraw draw = sample_beta_log(rng, a_i, 1.0);
      truth.m(j, i) = draw.value;
      truth.log_m(j, i) = draw.log_value;
    }
  }

  truth.y = PackedBits(group_sizes, m_features);
  ForwardSimulation out;
  out.data = sample_observations(truth, group_sizes, rng, std::move(group_labels),
                                 std::move(feature_labels), &truth.y);
  out.truth = std::move(truth);
  return out;
}

GroupedBinaryMatrix simulate_from_state(const ChainState& truth,
                                        const std::vector<Index>& group_sizes,
                                        std::uint64_t seed,
                                        std::vector<std::string> group_labels,
                                        std::vector<std::string> feature_labels) {
  if (static_cast<Index>(group_sizes.size()) != truth.num_groups()) {
    throw Error(ErrorKind::data, "group count does not match the generating state");
  }
  Rng rng(seed);
  return sample_observations(truth, group_sizes, rng, std::move(group_labels),
                             std::move(feature_labels), nullptr);
}

}  // namespace betacorm
