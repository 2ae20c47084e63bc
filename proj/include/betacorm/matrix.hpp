#pragma once

#include "betacorm/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace betacorm {

// Binary presence matrix whose rows are blocked into d labelled groups:
// rows [group_begin(j), group_begin(j)+group_sizes[j]) hold group j.
struct GroupedBinaryMatrix {
  BinaryMatrix entries;                      // N x M, values 0/1
  std::vector<Index> group_sizes;            // d positive counts, sum N
  std::vector<std::string> group_labels;     // d distinct names
  std::vector<std::string> feature_labels;   // M distinct names

  // Derived; recompute_derived() refreshes after direct mutation of entries.
  std::vector<Index> group_offsets;                          // d+1 prefix sums
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> group_ones;  // d x M column sums per group

  Index rows() const { return entries.rows(); }
  Index num_features() const { return entries.cols(); }
  Index num_groups() const { return static_cast<Index>(group_sizes.size()); }
  Index group_begin(Index j) const { return group_offsets[static_cast<std::size_t>(j)]; }
  Index group_of_row(Index r) const;
  Index ones_in_column(Index i) const { return group_ones.col(i).sum(); }

  void recompute_derived();
};

// Checks every invariant and throws ValidationError listing all violations.
GroupedBinaryMatrix validate_matrix(const BinaryMatrix& entries,
                                    std::vector<Index> group_sizes,
                                    std::vector<std::string> group_labels,
                                    std::vector<std::string> feature_labels);

// Column subset preserving group structure; `columns` must be in range.
GroupedBinaryMatrix select_columns(const GroupedBinaryMatrix& data,
                                   const std::vector<Index>& columns);

// Versioned line-oriented text format: header with groups/features, then one
// row of 0/1 characters per observation. Round trips bit-identically.
void save_matrix(const GroupedBinaryMatrix& data, const std::filesystem::path& path,
                 const ArtifactMeta& meta = {});
GroupedBinaryMatrix load_matrix(const std::filesystem::path& path, ArtifactMeta* meta = nullptr);

}  // namespace betacorm
