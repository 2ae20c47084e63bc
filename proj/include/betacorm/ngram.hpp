#pragma once

#include "betacorm/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace betacorm {

// Byte token: 0..255, or kUnknownByte for the "??" placeholder.
inline constexpr std::uint16_t kUnknownByte = 256;

struct HexDocument {
  std::string id;
  std::string family;
  std::vector<std::uint16_t> bytes;  // nonempty
};

// Parses hex-dump text: whitespace-separated tokens, two hex characters per
// byte (case-insensitive), "??" for an unknown byte. The first token of a
// line is dropped as an address when it is longer than two hex characters.
// Anything else raises a data error with its line and column.
std::vector<std::uint16_t> parse_hex_dump(std::string_view text);

// n contiguous known bytes as 2n uppercase hex characters; unknown bytes
// break contiguity. Presence only, no counts.
std::set<std::string> extract_ngrams(const HexDocument& doc, int n);

struct NGramVocabulary {
  int n = 0;
  std::vector<std::string> grams;  // unique, lexicographically sorted
};

enum class VocabularyFilter {
  all_families,  // keep grams present in at least one document of every family
  none,          // union over all documents
};

struct BuiltMatrix {
  GroupedBinaryMatrix matrix;
  NGramVocabulary vocabulary;
  std::vector<std::string> row_ids;  // document id per matrix row
};

// Groups documents by family (families ordered lexicographically, documents in
// input order) and builds the presence matrix over the filtered vocabulary.
BuiltMatrix build_matrix(std::span<const HexDocument> docs, int n, VocabularyFilter filter);

// Builds against a fixed vocabulary (e.g. a test set against the training
// vocabulary); unseen grams are simply absent.
BuiltMatrix build_matrix(std::span<const HexDocument> docs, const NGramVocabulary& vocabulary);

struct TrainTestSplit {
  std::vector<HexDocument> train;
  std::vector<HexDocument> test;
};

// Stratified-by-family split, deterministic per seed. Every family needs at
// least two documents; each side keeps at least one document per family.
TrainTestSplit split_train_test(std::span<const HexDocument> docs, double fraction,
                                std::uint64_t seed);

// Reads a directory of hex-dump files plus a two-column delimited label file
// mapping document id (file stem) to family.
std::vector<HexDocument> load_documents(const std::filesystem::path& input_dir,
                                        const std::filesystem::path& label_file);

}  // namespace betacorm
