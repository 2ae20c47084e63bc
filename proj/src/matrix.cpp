#include "betacorm/matrix.hpp"

#include "betacorm/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace betacorm {

Index GroupedBinaryMatrix::group_of_row(Index r) const {
  for (Index j = 0; j < num_groups(); ++j) {
    if (r < group_offsets[static_cast<std::size_t>(j + 1)]) return j;
  }
  throw Error(ErrorKind::data, "row index out of range");
}

void GroupedBinaryMatrix::recompute_derived() {
  const Index d = num_groups();
  group_offsets.assign(static_cast<std::size_t>(d) + 1, 0);
  for (Index j = 0; j < d; ++j) {
    group_offsets[static_cast<std::size_t>(j + 1)] =
        group_offsets[static_cast<std::size_t>(j)] + group_sizes[static_cast<std::size_t>(j)];
  }
  group_ones.resize(d, entries.cols());
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < entries.cols(); ++i) {
      Index count = 0;
      const Index begin = group_begin(j);
      for (Index k = 0; k < group_sizes[static_cast<std::size_t>(j)]; ++k) {
        count += entries(begin + k, i);
      }
      group_ones(j, i) = count;
    }
  }
}

namespace {

void check_distinct(const std::vector<std::string>& labels, const char* what,
                    std::vector<std::string>& violations) {
  std::unordered_set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      violations.push_back(std::string("duplicate ") + what + " label '" + label + "'");
    }
  }
}

}  // namespace

GroupedBinaryMatrix validate_matrix(const BinaryMatrix& entries,
                                    std::vector<Index> group_sizes,
                                    std::vector<std::string> group_labels,
                                    std::vector<std::string> feature_labels) {
  std::vector<std::string> violations;

  if (group_sizes.empty()) violations.push_back("no groups (d must be >= 1)");
  if (feature_labels.empty()) violations.push_back("no features (M must be >= 1)");
  if (group_labels.size() != group_sizes.size()) {
    violations.push_back("group label count does not match group count");
  }
  Index total = 0;
  for (std::size_t j = 0; j < group_sizes.size(); ++j) {
    if (group_sizes[j] < 1) {
      violations.push_back("empty group at index " + std::to_string(j + 1));
    } else {
      total += group_sizes[j];
    }
  }
  if (entries.rows() != total) {
    violations.push_back("row count " + std::to_string(entries.rows()) +
                         " does not equal sum of group sizes " + std::to_string(total));
  }
  if (entries.cols() != static_cast<Index>(feature_labels.size())) {
    violations.push_back("column count " + std::to_string(entries.cols()) +
                         " does not equal feature label count " +
                         std::to_string(feature_labels.size()));
  }
  check_distinct(group_labels, "group", violations);
  check_distinct(feature_labels, "feature", violations);

  if (violations.empty() || entries.rows() == total) {
    // Report non-binary cells with their (group, observation, feature) position.
    Index row = 0;
    for (std::size_t j = 0; j < group_sizes.size() && row < entries.rows(); ++j) {
      for (Index k = 0; k < group_sizes[j] && row < entries.rows(); ++k, ++row) {
        for (Index i = 0; i < entries.cols(); ++i) {
          if (entries(row, i) > 1) {
            violations.push_back("non-binary entry at (j=" + std::to_string(j + 1) +
                                 ",k=" + std::to_string(k + 1) + ",i=" + std::to_string(i + 1) +
                                 ")");
          }
        }
      }
    }
  }

  if (!violations.empty()) throw ValidationError(std::move(violations));

  GroupedBinaryMatrix out;
  out.entries = entries;
  out.group_sizes = std::move(group_sizes);
  out.group_labels = std::move(group_labels);
  out.feature_labels = std::move(feature_labels);
  out.recompute_derived();
  return out;
}

GroupedBinaryMatrix select_columns(const GroupedBinaryMatrix& data,
                                   const std::vector<Index>& columns) {
  if (columns.empty()) throw Error(ErrorKind::data, "empty column selection");
  BinaryMatrix sub(data.rows(), static_cast<Index>(columns.size()));
  std::vector<std::string> labels;
  labels.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Index i = columns[c];
    if (i < 0 || i >= data.num_features()) {
      throw Error(ErrorKind::data, "column index " + std::to_string(i) + " out of range");
    }
    sub.col(static_cast<Index>(c)) = data.entries.col(i);
    labels.push_back(data.feature_labels[static_cast<std::size_t>(i)]);
  }
  return validate_matrix(sub, data.group_sizes, data.group_labels, std::move(labels));
}

void save_matrix(const GroupedBinaryMatrix& data, const std::filesystem::path& path,
                 const ArtifactMeta& meta) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::data, "cannot open '" + path.string() + "' for writing");
  out << "betacorm-matrix v1\n";
  out << "seed " << meta.seed << "\n";
  out << "config " << (meta.config_hash.empty() ? "-" : meta.config_hash) << "\n";
  out << "groups " << data.num_groups() << "\n";
  for (Index j = 0; j < data.num_groups(); ++j) {
    out << data.group_labels[static_cast<std::size_t>(j)] << " "
        << data.group_sizes[static_cast<std::size_t>(j)] << "\n";
  }
  out << "features " << data.num_features() << "\n";
  for (const auto& f : data.feature_labels) out << f << "\n";
  out << "rows " << data.rows() << "\n";
  std::string line(static_cast<std::size_t>(data.num_features()), '0');
  for (Index r = 0; r < data.rows(); ++r) {
    for (Index i = 0; i < data.num_features(); ++i) {
      line[static_cast<std::size_t>(i)] = data.entries(r, i) ? '1' : '0';
    }
    out << line << "\n";
  }
  if (!out) throw Error(ErrorKind::data, "write failed for '" + path.string() + "'");
}

namespace {

std::string next_line(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::data, "unexpected end of file in '" + path.string() + "'");
  }
  return line;
}

}  // namespace

GroupedBinaryMatrix load_matrix(const std::filesystem::path& path, ArtifactMeta* meta) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::data, "cannot open '" + path.string() + "'");

  if (next_line(in, path) != "betacorm-matrix v1") {
    throw Error(ErrorKind::data, "'" + path.string() + "' is not a betacorm-matrix v1 file");
  }
  ArtifactMeta parsed;
  {
    std::istringstream ss(next_line(in, path));
    std::string key;
    ss >> key >> parsed.seed;
    if (key != "seed") throw Error(ErrorKind::data, "expected 'seed' line");
  }
  {
    std::istringstream ss(next_line(in, path));
    std::string key;
    ss >> key >> parsed.config_hash;
    if (key != "config") throw Error(ErrorKind::data, "expected 'config' line");
    if (parsed.config_hash == "-") parsed.config_hash.clear();
  }

  Index d = 0;
  {
    std::istringstream ss(next_line(in, path));
    std::string key;
    ss >> key >> d;
    if (key != "groups" || d < 1) throw Error(ErrorKind::data, "bad 'groups' line");
  }
  std::vector<std::string> group_labels;
  std::vector<Index> group_sizes;
  for (Index j = 0; j < d; ++j) {
    std::istringstream ss(next_line(in, path));
    std::string label;
    Index n = 0;
    ss >> label >> n;
    if (label.empty() || n < 1) throw Error(ErrorKind::data, "bad group line");
    group_labels.push_back(label);
    group_sizes.push_back(n);
  }

  Index m = 0;
  {
    std::istringstream ss(next_line(in, path));
    std::string key;
    ss >> key >> m;
    if (key != "features" || m < 1) throw Error(ErrorKind::data, "bad 'features' line");
  }
  std::vector<std::string> feature_labels;
  for (Index i = 0; i < m; ++i) feature_labels.push_back(next_line(in, path));

  Index n_rows = 0;
  {
    std::istringstream ss(next_line(in, path));
    std::string key;
    ss >> key >> n_rows;
    if (key != "rows" || n_rows < 1) throw Error(ErrorKind::data, "bad 'rows' line");
  }
  BinaryMatrix entries(n_rows, m);
  for (Index r = 0; r < n_rows; ++r) {
    const std::string line = next_line(in, path);
    if (static_cast<Index>(line.size()) != m) {
      throw Error(ErrorKind::data, "row " + std::to_string(r + 1) + " has wrong length");
    }
    for (Index i = 0; i < m; ++i) {
      const char ch = line[static_cast<std::size_t>(i)];
      if (ch != '0' && ch != '1') {
        throw Error(ErrorKind::data, "row " + std::to_string(r + 1) + " has non-binary character");
      }
      entries(r, i) = static_cast<std::uint8_t>(ch - '0');
    }
  }

  if (meta != nullptr) *meta = parsed;
  return validate_matrix(entries, std::move(group_sizes), std::move(group_labels),
                         std::move(feature_labels));
}

}  // namespace betacorm
