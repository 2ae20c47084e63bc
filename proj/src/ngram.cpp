#include "betacorm/ngram.hpp"

#include "betacorm/error.hpp"
#include "betacorm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace betacorm {

namespace {

bool is_hex_char(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return c - 'A' + 10;
}

bool all_hex(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), is_hex_char);
}

}  // namespace

std::vector<std::uint16_t> parse_hex_dump(std::string_view text) {
  std::vector<std::uint16_t> bytes;
  std::size_t line_no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);

    std::size_t col = 0;
    bool first_token = true;
    while (col < line.size()) {
      while (col < line.size() && (line[col] == ' ' || line[col] == '\t' || line[col] == '\r')) {
        ++col;
      }
      if (col >= line.size()) break;
      std::size_t end = col;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') {
        ++end;
      }
      const std::string_view token = line.substr(col, end - col);

      if (token == "??") {
        bytes.push_back(kUnknownByte);
      } else if (token.size() == 2 && all_hex(token)) {
        bytes.push_back(static_cast<std::uint16_t>(hex_value(token[0]) * 16 + hex_value(token[1])));
      } else if (first_token && token.size() > 2 && all_hex(token)) {
        // leading per-line address token
      } else {
        throw Error(ErrorKind::data, "invalid hex token '" + std::string(token) + "' at line " +
                                         std::to_string(line_no) + ", column " +
                                         std::to_string(col + 1));
      }
      first_token = false;
      col = end;
    }

    if (eol == std::string_view::npos) break;
    pos = eol + 1;
    ++line_no;
  }
  return bytes;
}

std::set<std::string> extract_ngrams(const HexDocument& doc, int n) {
  if (n < 1) throw Error(ErrorKind::usage, "n-gram length must be >= 1");
  std::set<std::string> grams;
  const auto size = static_cast<std::ptrdiff_t>(doc.bytes.size());

  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string key(static_cast<std::size_t>(2 * n), '0');
  std::ptrdiff_t run_start = 0;
  for (std::ptrdiff_t t = 0; t <= size; ++t) {
    if (t == size || doc.bytes[static_cast<std::size_t>(t)] == kUnknownByte) {
      run_start = t + 1;  // unknown bytes break contiguity
      continue;
    }
    if (t - run_start + 1 < n) continue;
    for (int b = 0; b < n; ++b) {
      const auto byte = doc.bytes[static_cast<std::size_t>(t - n + 1 + b)];
      key[static_cast<std::size_t>(2 * b)] = kHex[byte >> 4];
      key[static_cast<std::size_t>(2 * b + 1)] = kHex[byte & 0xF];
    }
    grams.insert(key);
  }
  return grams;
}

namespace {

struct GroupedDocs {
  std::vector<std::string> families;                  // lexicographic
  std::vector<std::vector<std::size_t>> doc_indices;  // per family, input order
};

GroupedDocs group_by_family(std::span<const HexDocument> docs) {
  if (docs.empty()) throw Error(ErrorKind::data, "no documents");
  std::map<std::string, std::vector<std::size_t>> by_family;
  for (std::size_t k = 0; k < docs.size(); ++k) {
    if (docs[k].bytes.empty()) {
      throw Error(ErrorKind::data, "document '" + docs[k].id + "' has no bytes");
    }
    by_family[docs[k].family].push_back(k);
  }
  GroupedDocs grouped;
  for (auto& [family, indices] : by_family) {
    grouped.families.push_back(family);
    grouped.doc_indices.push_back(std::move(indices));
  }
  return grouped;
}

BuiltMatrix assemble(std::span<const HexDocument> docs, const GroupedDocs& grouped,
                     NGramVocabulary vocabulary) {
  std::unordered_map<std::string_view, Index> column;
  column.reserve(vocabulary.grams.size());
  for (std::size_t k = 0; k < vocabulary.grams.size(); ++k) {
    column.emplace(vocabulary.grams[k], static_cast<Index>(k));
  }

  Index total = 0;
  std::vector<Index> group_sizes;
  for (const auto& indices : grouped.doc_indices) {
    group_sizes.push_back(static_cast<Index>(indices.size()));
    total += static_cast<Index>(indices.size());
  }

  BinaryMatrix entries = BinaryMatrix::Zero(total, static_cast<Index>(vocabulary.grams.size()));
  std::vector<std::string> row_ids;
  row_ids.reserve(static_cast<std::size_t>(total));
  Index row = 0;
  for (const auto& indices : grouped.doc_indices) {
    for (const std::size_t k : indices) {
      for (const std::string& gram : extract_ngrams(docs[k], vocabulary.n)) {
        const auto it = column.find(gram);
        if (it != column.end()) entries(row, it->second) = 1;
      }
      row_ids.push_back(docs[k].id);
      ++row;
    }
  }

  BuiltMatrix out;
  out.matrix = validate_matrix(entries, std::move(group_sizes), grouped.families,
                               vocabulary.grams);
  out.vocabulary = std::move(vocabulary);
  out.row_ids = std::move(row_ids);
  return out;
}

}  // namespace

BuiltMatrix build_matrix(std::span<const HexDocument> docs, int n, VocabularyFilter filter) {
  const GroupedDocs grouped = group_by_family(docs);

  // Per-family union of grams, then intersect (or union) across families.
  std::vector<std::set<std::string>> family_grams;
  family_grams.reserve(grouped.families.size());
  for (const auto& indices : grouped.doc_indices) {
    std::set<std::string> grams;
    for (const std::size_t k : indices) grams.merge(extract_ngrams(docs[k], n));
    family_grams.push_back(std::move(grams));
  }

  std::vector<std::string> vocabulary;
  if (filter == VocabularyFilter::none) {
    std::set<std::string> all;
    for (auto& grams : family_grams) all.merge(std::move(grams));
    vocabulary.assign(all.begin(), all.end());
  } else {
    for (const std::string& gram : family_grams.front()) {
      const bool everywhere =
          std::all_of(family_grams.begin() + 1, family_grams.end(),
                      [&](const std::set<std::string>& g) { return g.contains(gram); });
      if (everywhere) vocabulary.push_back(gram);
    }
  }
  if (vocabulary.empty()) {
    throw Error(ErrorKind::data, "vocabulary is empty after filtering");
  }
  return assemble(docs, grouped, NGramVocabulary{n, std::move(vocabulary)});
}

BuiltMatrix build_matrix(std::span<const HexDocument> docs, const NGramVocabulary& vocabulary) {
  if (vocabulary.grams.empty()) throw Error(ErrorKind::data, "empty vocabulary");
  return assemble(docs, group_by_family(docs), vocabulary);
}

TrainTestSplit split_train_test(std::span<const HexDocument> docs, double fraction,
                                std::uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw Error(ErrorKind::usage, "split fraction must be strictly between 0 and 1");
  }
  const GroupedDocs grouped = group_by_family(docs);

  TrainTestSplit split;
  Rng rng(seed);
  for (std::size_t f = 0; f < grouped.families.size(); ++f) {
    std::vector<std::size_t> indices = grouped.doc_indices[f];
    if (indices.size() < 2) {
      throw Error(ErrorKind::data, "family '" + grouped.families[f] +
                                       "' has fewer than 2 documents and cannot be stratified");
    }
    Rng family_rng = rng.substream(f);
    for (std::size_t k = indices.size() - 1; k > 0; --k) {
      const auto r = static_cast<std::size_t>(family_rng.next() % (k + 1));
      std::swap(indices[k], indices[r]);
    }
    const auto n = static_cast<double>(indices.size());
    auto n_train = static_cast<std::size_t>(std::llround(fraction * n));
    n_train = std::clamp<std::size_t>(n_train, 1, indices.size() - 1);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      (k < n_train ? split.train : split.test).push_back(docs[indices[k]]);
    }
  }
  return split;
}

std::vector<HexDocument> load_documents(const std::filesystem::path& input_dir,
                                        const std::filesystem::path& label_file) {
  std::ifstream labels_in(label_file);
  if (!labels_in) throw Error(ErrorKind::data, "cannot open label file '" + label_file.string() + "'");

  std::unordered_map<std::string, std::string> family_of;
  std::string line;
  while (std::getline(labels_in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line) {
      if (ch == ',' || ch == '\t') ch = ' ';
    }
    std::istringstream ss(line);
    std::string id;
    std::string family;
    ss >> id >> family;
    if (id.empty() || family.empty()) {
      throw Error(ErrorKind::data, "bad label line '" + line + "'");
    }
    if (!family_of.emplace(id, family).second) {
      throw Error(ErrorKind::data, "duplicate label for document '" + id + "'");
    }
  }
  if (family_of.empty()) throw Error(ErrorKind::data, "label file has no entries");

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(input_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<HexDocument> docs;
  for (const auto& path : files) {
    const std::string id = path.stem().string();
    const auto it = family_of.find(id);
    if (it == family_of.end()) continue;  // unlabeled files are skipped
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    HexDocument doc{id, it->second, {}};
    try {
      doc.bytes = parse_hex_dump(buffer.str());
    } catch (const Error& e) {
      throw Error(ErrorKind::data, path.string() + ": " + e.what());
    }
    if (doc.bytes.empty()) {
      throw Error(ErrorKind::data, "document '" + id + "' has no bytes");
    }
    docs.push_back(std::move(doc));
  }
  if (docs.empty()) {
    throw Error(ErrorKind::data, "no labelled documents found in '" + input_dir.string() + "'");
  }
  return docs;
}

}  // namespace betacorm
