#include "betacorm/selection.hpp"

#include "betacorm/error.hpp"

#include <algorithm>

namespace betacorm {

Vector posterior_shape_means(const PosteriorSamples& samples) {
  if (samples.draws.empty()) throw Error(ErrorKind::data, "no posterior draws");
  if (samples.meta.shape_mode == ShapeMode::global_vague ||
      samples.draws.front().shapes.size() != samples.num_features()) {
    throw Error(ErrorKind::data, "shape means require per-feature shape samples");
  }
  Vector means = Vector::Zero(samples.num_features());
  for (const Draw& draw : samples.draws) means += draw.shapes;
  return means / static_cast<double>(samples.draws.size());
}

SelectionResult threshold_sweep(const Vector& means, const GroupedBinaryMatrix& validation,
                                const PredictiveProfile& profile) {
  if (means.size() != profile.theta.cols() || means.size() != validation.num_features()) {
    throw Error(ErrorKind::data, "shape means do not align with the validation features");
  }

  std::vector<double> sorted(means.begin(), means.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<double> candidates;
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    candidates.push_back(0.5 * (sorted[k] + sorted[k + 1]));
  }
  candidates.push_back(sorted.back() + 1.0);  // all features

  SelectionResult best;
  bool have_best = false;
  for (const double threshold : candidates) {
    std::vector<Index> selected;
    for (Index i = 0; i < means.size(); ++i) {
      if (means[i] <= threshold) selected.push_back(i);
    }
    if (selected.empty()) continue;  // never classify with zero features
    const double accuracy = classification_accuracy(validation, profile, selected);
    best.sweep_table.push_back({threshold, static_cast<Index>(selected.size()), accuracy});
    // Ascending candidates: strict > keeps the fewest features / smallest
    // threshold among ties.
    if (!have_best || accuracy > best.accuracy_at_threshold) {
      best.threshold = threshold;
      best.selected = std::move(selected);
      best.accuracy_at_threshold = accuracy;
      have_best = true;
    }
  }
  if (!have_best) throw Error(ErrorKind::data, "threshold sweep found no nonempty selection");
  return best;
}

GroupedBinaryMatrix select_features(const SelectionResult& result,
                                    const GroupedBinaryMatrix& data) {
  if (result.selected.empty()) throw Error(ErrorKind::data, "empty feature selection");
  return select_columns(data, result.selected);
}

}  // namespace betacorm
