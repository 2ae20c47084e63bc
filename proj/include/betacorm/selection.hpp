#pragma once

#include "betacorm/chain.hpp"
#include "betacorm/matrix.hpp"
#include "betacorm/predict.hpp"

#include <vector>

namespace betacorm {

// Result of the accuracy-maximizing threshold sweep over posterior shape
// means: a feature is selected when mean(a_i) <= threshold, so small shapes
// (strong shrinkage, discriminative features) come first.
struct SelectionResult {
  struct SweepRow {
    double threshold = 0.0;
    Index count = 0;
    double accuracy = 0.0;
  };

  double threshold = 0.0;
  std::vector<Index> selected;  // ascending feature indices
  double accuracy_at_threshold = 0.0;
  std::vector<SweepRow> sweep_table;
};

// Arithmetic mean of each a_i over the retained draws. Rejects global-mode
// samples, which carry no per-feature shapes.
Vector posterior_shape_means(const PosteriorSamples& samples);

// Candidate thresholds are midpoints between consecutive distinct sorted
// means plus one value above the maximum (the all-features candidate). The
// validation set is classified at each candidate using the profile restricted
// to the selected columns; returns the accuracy maximizer with ties broken
// toward fewer features, then the smaller threshold.
SelectionResult threshold_sweep(const Vector& means, const GroupedBinaryMatrix& validation,
                                const PredictiveProfile& profile);

// Column restriction of `data` to the selected features.
GroupedBinaryMatrix select_features(const SelectionResult& result,
                                    const GroupedBinaryMatrix& data);

}  // namespace betacorm
