#include "betacorm/predict.hpp"

#include "betacorm/error.hpp"

#include <cmath>

namespace betacorm {

PredictiveProfile predictive_profile(const PosteriorSamples& samples,
                                     const GroupedBinaryMatrix& data, PriorWeighting weighting) {
  if (samples.draws.empty()) throw Error(ErrorKind::data, "no posterior draws");
  const Index d = samples.num_groups();
  const Index m_features = samples.num_features();
  if (d != data.num_groups() || m_features != data.num_features()) {
    throw Error(ErrorKind::data, "samples and data dimensions do not align");
  }

  PredictiveProfile profile;
  profile.theta = Matrix::Zero(d, m_features);
  for (const Draw& draw : samples.draws) {
    profile.theta.noalias() += draw.m * draw.p.asDiagonal();
  }
  profile.theta /= static_cast<double>(samples.draws.size());

  profile.group_priors.resize(d);
  if (weighting == PriorWeighting::uniform) {
    profile.group_priors.setConstant(1.0 / static_cast<double>(d));
  } else {
    for (Index j = 0; j < d; ++j) {
      profile.group_priors[j] = static_cast<double>(data.group_sizes[static_cast<std::size_t>(j)]) /
                                static_cast<double>(data.rows());
    }
  }
  return profile;
}

Classification classify(const Eigen::Ref<const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>>& x,
                        const PredictiveProfile& profile, std::span<const Index> subset) {
  const Index d = profile.theta.rows();
  const Index m_features = profile.theta.cols();
  if (x.size() != m_features) {
    throw Error(ErrorKind::data, "feature vector length does not match the profile");
  }

  Classification out;
  out.log_scores.resize(d);
  for (Index j = 0; j < d; ++j) {
    double score = std::log(profile.group_priors[j]);
    auto accumulate = [&](Index i) {
      const double theta = profile.theta(j, i);
      score += x[i] ? std::log(theta) : std::log1p(-theta);
    };
    if (subset.empty()) {
      for (Index i = 0; i < m_features; ++i) accumulate(i);
    } else {
      for (const Index i : subset) {
        if (i < 0 || i >= m_features) {
          throw Error(ErrorKind::data, "subset index out of range");
        }
        accumulate(i);
      }
    }
    out.log_scores[j] = score;
  }
  out.group = 0;
  for (Index j = 1; j < d; ++j) {
    if (out.log_scores[j] > out.log_scores[out.group]) out.group = j;
  }
  return out;
}

std::vector<Index> classify_rows(const GroupedBinaryMatrix& data, const PredictiveProfile& profile,
                                 std::span<const Index> subset) {
  std::vector<Index> predicted;
  predicted.reserve(static_cast<std::size_t>(data.rows()));
  for (Index r = 0; r < data.rows(); ++r) {
    predicted.push_back(classify(data.entries.row(r).transpose(), profile, subset).group);
  }
  return predicted;
}

double classification_accuracy(const GroupedBinaryMatrix& data, const PredictiveProfile& profile,
                               std::span<const Index> subset) {
  const std::vector<Index> predicted = classify_rows(data, profile, subset);
  Index correct = 0;
  for (Index r = 0; r < data.rows(); ++r) {
    if (predicted[static_cast<std::size_t>(r)] == data.group_of_row(r)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

Metrics evaluate_metrics(std::span<const Index> predicted, std::span<const Index> truth,
                         Index num_groups) {
  if (predicted.size() != truth.size() || predicted.empty()) {
    throw Error(ErrorKind::data, "label lists must be nonempty and of equal length");
  }
  std::vector<Index> tp(static_cast<std::size_t>(num_groups), 0);
  std::vector<Index> fp(static_cast<std::size_t>(num_groups), 0);
  std::vector<Index> fn(static_cast<std::size_t>(num_groups), 0);
  Index correct = 0;
  for (std::size_t r = 0; r < truth.size(); ++r) {
    const Index t = truth[r];
    const Index p = predicted[r];
    if (t < 0 || t >= num_groups || p < 0 || p >= num_groups) {
      throw Error(ErrorKind::data, "label outside the valid group range");
    }
    if (t == p) {
      ++correct;
      ++tp[static_cast<std::size_t>(t)];
    } else {
      ++fp[static_cast<std::size_t>(p)];
      ++fn[static_cast<std::size_t>(t)];
    }
  }

  Metrics metrics;
  metrics.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  double f1_sum = 0.0;
  for (Index g = 0; g < num_groups; ++g) {
    const auto gi = static_cast<std::size_t>(g);
    const double denom_p = static_cast<double>(tp[gi] + fp[gi]);
    const double denom_r = static_cast<double>(tp[gi] + fn[gi]);
    // A class never predicted contributes precision 0.
    const double prec = denom_p > 0.0 ? static_cast<double>(tp[gi]) / denom_p : 0.0;
    const double rec = denom_r > 0.0 ? static_cast<double>(tp[gi]) / denom_r : 0.0;
    precision_sum += prec;
    recall_sum += rec;
    f1_sum += (prec + rec) > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
  }
  const double d = static_cast<double>(num_groups);
  metrics.precision = precision_sum / d;
  metrics.recall = recall_sum / d;
  metrics.f1 = f1_sum / d;
  return metrics;
}

double profile_distance(const PredictiveProfile& a, const PredictiveProfile& b) {
  if (a.theta.rows() != b.theta.rows() || a.theta.cols() != b.theta.cols()) {
    throw Error(ErrorKind::data, "profile shapes do not match");
  }
  const double cells = static_cast<double>(a.theta.size());
  return (a.theta - b.theta).norm() / std::sqrt(cells);
}

}  // namespace betacorm
