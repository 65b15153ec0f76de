#include "isoscribe/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace isoscribe {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::int64_t parse_count(const std::string& s, int line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("count is not an integer: '" + s + "'", line_no);
  return value;
}

}  // namespace

int Alphabets::letter_index(const std::string& s) const {
  const auto it = letter_idx_.find(s);
  return it == letter_idx_.end() ? -1 : it->second;
}

int Alphabets::isocode_index(const std::string& s) const {
  const auto it = isocode_idx_.find(s);
  return it == isocode_idx_.end() ? -1 : it->second;
}

void Alphabets::validate() const {
  std::set<std::string> seen;
  for (const auto& s : letters)
    if (!seen.insert(s).second)
      throw DataError("duplicate letter symbol: '" + s + "'");
  seen.clear();
  for (const auto& s : isocodes)
    if (!seen.insert(s).second)
      throw DataError("duplicate isocode symbol: '" + s + "'");
}

void Alphabets::rebuild_index() {
  validate();
  letter_idx_.clear();
  isocode_idx_.clear();
  for (std::size_t i = 0; i < letters.size(); ++i)
    letter_idx_[letters[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < isocodes.size(); ++i)
    isocode_idx_[isocodes[i]] = static_cast<int>(i);
}

std::int64_t Document::character_count() const {
  std::int64_t total = 0;
  for (const Cell& c : cells) total += c.count;
  return total;
}

std::vector<std::pair<int, std::span<const Cell>>> Document::letter_groups()
    const {
  std::vector<std::pair<int, std::span<const Cell>>> groups;
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j].letter == cells[i].letter) ++j;
    groups.emplace_back(cells[i].letter,
                        std::span<const Cell>(cells.data() + i, j - i));
    i = j;
  }
  return groups;
}

bool Document::has_letter(int letter) const {
  const auto it = std::lower_bound(
      cells.begin(), cells.end(), letter,
      [](const Cell& c, int l) { return c.letter < l; });
  return it != cells.end() && it->letter == letter;
}

std::vector<std::int64_t> Document::letter_counts(int letter,
                                                  std::size_t M) const {
  std::vector<std::int64_t> dense(M, 0);
  auto it = std::lower_bound(cells.begin(), cells.end(), letter,
                             [](const Cell& c, int l) { return c.letter < l; });
  for (; it != cells.end() && it->letter == letter; ++it)
    dense[static_cast<std::size_t>(it->isocode)] = it->count;
  return dense;
}

void Document::sort_cells() {
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.letter, a.isocode) < std::tie(b.letter, b.isocode);
  });
}

Corpus Corpus::build(Alphabets alphabets, std::vector<Document> documents) {
  alphabets.rebuild_index();
  Corpus corpus;
  corpus.alphabets = std::move(alphabets);
  corpus.documents = std::move(documents);

  std::sort(corpus.documents.begin(), corpus.documents.end(),
            [](const Document& a, const Document& b) {
              return std::tie(a.writer_id, a.doc_id) <
                     std::tie(b.writer_id, b.doc_id);
            });

  std::set<DocKey> keys;
  const int L = static_cast<int>(corpus.alphabets.L());
  const int M = static_cast<int>(corpus.alphabets.M());
  for (std::size_t pos = 0; pos < corpus.documents.size(); ++pos) {
    Document& doc = corpus.documents[pos];
    if (!keys.insert({doc.writer_id, doc.doc_id}).second)
      throw DataError("duplicate document key: " + doc.writer_id + "," +
                      doc.doc_id);
    doc.sort_cells();
    const Cell* prev = nullptr;
    for (const Cell& c : doc.cells) {
      if (c.letter < 0 || c.letter >= L || c.isocode < 0 || c.isocode >= M)
        throw DataError("cell index out of alphabet bounds in document " +
                        doc.writer_id + "," + doc.doc_id);
      if (c.count < 1)
        throw DataError("count must be positive in document " + doc.writer_id +
                        "," + doc.doc_id);
      if (prev && prev->letter == c.letter && prev->isocode == c.isocode)
        throw DataError("duplicate cell in document " + doc.writer_id + "," +
                        doc.doc_id);
      prev = &c;
    }
    if (doc.writer_id != kUnknownWriter)
      corpus.writer_index[doc.writer_id].push_back(pos);
  }
  return corpus;
}

const Document* Corpus::find(const DocKey& key) const {
  for (const Document& doc : documents)
    if (doc.writer_id == key.writer_id && doc.doc_id == key.doc_id) return &doc;
  return nullptr;
}

Corpus parse_corpus(std::istream& in, const std::optional<Alphabets>& sidecar) {
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty input, expected header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "writer,doc,letter,isocode,count")
    throw ParseError("bad header, expected 'writer,doc,letter,isocode,count'",
                     line_no);

  struct Row {
    std::string writer, doc, letter, isocode;
    std::int64_t count;
  };
  std::vector<Row> rows;
  std::set<std::string> letters_seen, isocodes_seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 5)
      throw ParseError("expected 5 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    for (const auto& f : fields)
      if (f.empty()) throw ParseError("empty field", line_no);
    const std::int64_t count = parse_count(fields[4], line_no);
    if (count <= 0) throw ParseError("count must be positive", line_no);
    rows.push_back({fields[0], fields[1], fields[2], fields[3], count});
    letters_seen.insert(fields[2]);
    isocodes_seen.insert(fields[3]);
  }

  Alphabets alphabets;
  if (sidecar) {
    alphabets = *sidecar;
    alphabets.rebuild_index();
  } else {
    alphabets.letters.assign(letters_seen.begin(), letters_seen.end());
    alphabets.isocodes.assign(isocodes_seen.begin(), isocodes_seen.end());
    alphabets.rebuild_index();
  }

  std::map<DocKey, Document> docs;
  std::set<std::tuple<std::string, std::string, std::string, std::string>>
      cells_seen;
  for (const Row& row : rows) {
    if (!cells_seen.insert({row.writer, row.doc, row.letter, row.isocode})
             .second)
      throw ParseError("duplicate cell: " + row.writer + "," + row.doc + "," +
                       row.letter + "," + row.isocode);
    const int l = alphabets.letter_index(row.letter);
    if (l < 0) throw ParseError("letter '" + row.letter + "' not in alphabet");
    const int m = alphabets.isocode_index(row.isocode);
    if (m < 0)
      throw ParseError("isocode '" + row.isocode + "' not in alphabet");
    Document& doc = docs[{row.writer, row.doc}];
    doc.writer_id = row.writer;
    doc.doc_id = row.doc;
    doc.cells.push_back({l, m, row.count});
  }

  std::vector<Document> documents;
  documents.reserve(docs.size());
  for (auto& [key, doc] : docs) documents.push_back(std::move(doc));
  return Corpus::build(std::move(alphabets), std::move(documents));
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream out;
  out << "writer,doc,letter,isocode,count\n";
  for (const Document& doc : corpus.documents) {
    // Cells are sorted by (letter index, isocode index); canonical output
    // orders by symbol, so re-sort the row projections.
    struct Row {
      std::string letter, isocode;
      std::int64_t count;
    };
    std::vector<Row> rows;
    rows.reserve(doc.cells.size());
    for (const Cell& c : doc.cells)
      rows.push_back({corpus.alphabets.letters[c.letter],
                      corpus.alphabets.isocodes[c.isocode], c.count});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return std::tie(a.letter, a.isocode) < std::tie(b.letter, b.isocode);
    });
    for (const Row& r : rows)
      out << doc.writer_id << ',' << doc.doc_id << ',' << r.letter << ','
          << r.isocode << ',' << r.count << '\n';
  }
  return out.str();
}

Alphabets parse_alphabet_sidecar(std::istream& in) {
  Alphabets alphabets;
  std::string line;
  int line_no = 0;
  bool saw_letters = false, saw_isocodes = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("letters=", 0) == 0) {
      alphabets.letters = split(line.substr(8), ',');
      saw_letters = true;
    } else if (line.rfind("isocodes=", 0) == 0) {
      alphabets.isocodes = split(line.substr(9), ',');
      saw_isocodes = true;
    } else {
      throw ParseError("expected 'letters=' or 'isocodes=' line", line_no);
    }
  }
  if (!saw_letters || !saw_isocodes)
    throw ParseError("sidecar must define both letters= and isocodes=");
  alphabets.rebuild_index();
  return alphabets;
}

std::string serialize_alphabet_sidecar(const Alphabets& alphabets) {
  std::ostringstream out;
  out << "letters=";
  for (std::size_t i = 0; i < alphabets.letters.size(); ++i)
    out << (i ? "," : "") << alphabets.letters[i];
  out << "\nisocodes=";
  for (std::size_t i = 0; i < alphabets.isocodes.size(); ++i)
    out << (i ? "," : "") << alphabets.isocodes[i];
  out << "\n";
  return out.str();
}

std::int64_t character_count(const Document& doc) {
  return doc.character_count();
}

}  // namespace isoscribe
