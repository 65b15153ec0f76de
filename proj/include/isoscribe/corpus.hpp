#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace isoscribe {

// Thrown for malformed input files; carries a 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                    : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Documents with this writer id are of unknown writership; they are excluded
// from the corpus writer index.
inline constexpr const char* kUnknownWriter = "?";

// Ordered letter and isocode symbol lists. Indices into these lists are the
// (letter, isocode) coordinates used everywhere else.
struct Alphabets {
  std::vector<std::string> letters;
  std::vector<std::string> isocodes;

  std::size_t L() const { return letters.size(); }
  std::size_t M() const { return isocodes.size(); }

  int letter_index(const std::string& s) const;
  int isocode_index(const std::string& s) const;

  // Rejects duplicate symbols within either list.
  void validate() const;
  void rebuild_index();

 private:
  std::unordered_map<std::string, int> letter_idx_;
  std::unordered_map<std::string, int> isocode_idx_;
};

struct Cell {
  int letter;
  int isocode;
  std::int64_t count;  // always >= 1; zero cells are implicit

  friend bool operator==(const Cell&, const Cell&) = default;
};

// One writing sample: a sparse isocode-by-letter count matrix.
struct Document {
  std::string writer_id;
  std::string doc_id;
  std::vector<Cell> cells;  // sorted by (letter, isocode), unique

  std::int64_t character_count() const;

  // Cells grouped by letter; spans point into `cells`.
  std::vector<std::pair<int, std::span<const Cell>>> letter_groups() const;

  bool has_letter(int letter) const;

  // Dense length-M count vector for one letter.
  std::vector<std::int64_t> letter_counts(int letter, std::size_t M) const;

  void sort_cells();
};

struct DocKey {
  std::string writer_id;
  std::string doc_id;

  friend auto operator<=>(const DocKey&, const DocKey&) = default;
};

// Immutable after construction; safe for concurrent reads.
struct Corpus {
  Alphabets alphabets;
  std::vector<Document> documents;  // sorted by (writer_id, doc_id)
  // writer_id -> positions in `documents`; unknown-writer docs excluded
  std::map<std::string, std::vector<std::size_t>> writer_index;

  // Validates bounds, ordering, and duplicates, and builds the writer index.
  static Corpus build(Alphabets alphabets, std::vector<Document> documents);

  const Document* find(const DocKey& key) const;
  std::size_t writer_count() const { return writer_index.size(); }
};

// Long-form CSV, header `writer,doc,letter,isocode,count`. Alphabets default
// to the sorted distinct symbols observed unless `sidecar` pins them.
Corpus parse_corpus(std::istream& in,
                    const std::optional<Alphabets>& sidecar = std::nullopt);

// Canonical serialization: header plus one row per nonzero cell, ordered by
// (writer, doc, letter, isocode). parse followed by serialize is the
// identity on canonical output.
std::string serialize_corpus(const Corpus& corpus);

// Sidecar format: lines `letters=<comma list>` and `isocodes=<comma list>`.
Alphabets parse_alphabet_sidecar(std::istream& in);
std::string serialize_alphabet_sidecar(const Alphabets& alphabets);

std::int64_t character_count(const Document& doc);

}  // namespace isoscribe
