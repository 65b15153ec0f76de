#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "isoscribe/corpus.hpp"
#include "isoscribe/synthgen.hpp"

using namespace isoscribe;

namespace {

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

const std::string kSmall =
    "writer,doc,letter,isocode,count\n"
    "w1,d1,a,i1,3\n"
    "w1,d1,a,i2,1\n"
    "w1,d1,b,i1,2\n"
    "w1,d2,a,i1,5\n"
    "w2,d1,b,i2,4\n";

}  // namespace

TEST_CASE("parse_corpus builds documents, alphabets, and writer index") {
  const Corpus c = parse(kSmall);
  CHECK(c.alphabets.letters == std::vector<std::string>{"a", "b"});
  CHECK(c.alphabets.isocodes == std::vector<std::string>{"i1", "i2"});
  REQUIRE(c.documents.size() == 3);
  CHECK(c.writer_count() == 2);
  CHECK(c.writer_index.at("w1").size() == 2);
  CHECK(c.writer_index.at("w2").size() == 1);

  const Document* d = c.find({"w1", "d1"});
  REQUIRE(d != nullptr);
  CHECK(d->character_count() == 6);
  CHECK(d->has_letter(0));
  CHECK(d->has_letter(1));
  CHECK(d->letter_counts(0, 2) == std::vector<std::int64_t>{3, 1});
  CHECK(d->letter_counts(1, 2) == std::vector<std::int64_t>{2, 0});

  const auto groups = d->letter_groups();
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].first == 0);
  CHECK(groups[0].second.size() == 2);
  CHECK(groups[1].first == 1);
  CHECK(groups[1].second.size() == 1);
}

TEST_CASE("serialize_corpus round-trips canonically") {
  const Corpus c = parse(kSmall);
  const std::string s1 = serialize_corpus(c);
  std::istringstream in(s1);
  const Corpus c2 = parse_corpus(in);
  CHECK(serialize_corpus(c2) == s1);
  CHECK(s1 == kSmall);  // kSmall is already in canonical order
}

TEST_CASE("unknown writer documents are kept but not indexed") {
  const Corpus c = parse(
      "writer,doc,letter,isocode,count\n"
      "?,u1,a,i1,2\n"
      "w1,d1,a,i1,3\n");
  CHECK(c.documents.size() == 2);
  CHECK(c.writer_count() == 1);
  CHECK(c.writer_index.count(kUnknownWriter) == 0);
  CHECK(c.find({"?", "u1"}) != nullptr);
}

TEST_CASE("parse errors carry line numbers and clear messages") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("writer,doc\n"), ParseError);
  CHECK_THROWS_AS(parse("writer,doc,letter,isocode,count\nw1,d1,a,i1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("writer,doc,letter,isocode,count\nw1,d1,a,i1,x\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("writer,doc,letter,isocode,count\nw1,d1,a,i1,0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("writer,doc,letter,isocode,count\nw1,d1,a,i1,-3\n"),
                  ParseError);
  CHECK_THROWS_AS(
      parse("writer,doc,letter,isocode,count\nw1,d1,a,i1,1\nw1,d1,a,i1,2\n"),
      ParseError);
  CHECK_THROWS_AS(parse("writer,doc,letter,isocode,count\nw1,d1,,i1,1\n"),
                  ParseError);

  try {
    parse("writer,doc,letter,isocode,count\nw1,d1,a,i1,1\nw1,d1,b,i1,bad\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("a sidecar pins the alphabets and rejects out-of-alphabet symbols") {
  std::istringstream sc("letters=a,b,c\nisocodes=i1,i2,i9\n");
  const Alphabets alphabets = parse_alphabet_sidecar(sc);
  CHECK(alphabets.letters == std::vector<std::string>{"a", "b", "c"});
  CHECK(alphabets.isocodes == std::vector<std::string>{"i1", "i2", "i9"});

  std::istringstream in(kSmall);
  const Corpus c = parse_corpus(in, alphabets);
  CHECK(c.alphabets.L() == 3);
  CHECK(c.alphabets.M() == 3);

  std::istringstream bad("writer,doc,letter,isocode,count\nw1,d1,z,i1,1\n");
  CHECK_THROWS_AS(parse_corpus(bad, alphabets), ParseError);

  // Round trip of the sidecar itself.
  std::istringstream sc2(serialize_alphabet_sidecar(alphabets));
  const Alphabets again = parse_alphabet_sidecar(sc2);
  CHECK(again.letters == alphabets.letters);
  CHECK(again.isocodes == alphabets.isocodes);
}

TEST_CASE("sidecar parse errors") {
  std::istringstream a("letters=a,b\n");
  CHECK_THROWS_AS(parse_alphabet_sidecar(a), ParseError);
  std::istringstream b("nonsense\n");
  CHECK_THROWS_AS(parse_alphabet_sidecar(b), ParseError);
}

TEST_CASE("Corpus::build validates invariants") {
  Alphabets al;
  al.letters = {"a"};
  al.isocodes = {"i1", "i2"};
  al.rebuild_index();

  {
    Document d{"w1", "d1", {{0, 0, 1}}};
    Document dup{"w1", "d1", {{0, 1, 1}}};
    CHECK_THROWS_AS(Corpus::build(al, {d, dup}), DataError);
  }
  {
    Document d{"w1", "d1", {{0, 5, 1}}};  // isocode out of bounds
    CHECK_THROWS_AS(Corpus::build(al, {d}), DataError);
  }
  {
    Document d{"w1", "d1", {{0, 0, 0}}};  // zero count
    CHECK_THROWS_AS(Corpus::build(al, {d}), DataError);
  }
  {
    Document d{"w1", "d1", {{0, 0, 2}, {0, 0, 3}}};  // duplicate cell
    CHECK_THROWS_AS(Corpus::build(al, {d}), DataError);
  }
  {
    Alphabets bad;
    bad.letters = {"a", "a"};
    bad.isocodes = {"i1"};
    CHECK_THROWS_AS(bad.validate(), DataError);
  }
}

TEST_CASE("documents are sorted and find is exact") {
  const Corpus c = parse(
      "writer,doc,letter,isocode,count\n"
      "w2,d1,a,i1,1\n"
      "w1,d2,a,i1,1\n"
      "w1,d1,a,i1,1\n");
  REQUIRE(c.documents.size() == 3);
  CHECK(c.documents[0].writer_id == "w1");
  CHECK(c.documents[0].doc_id == "d1");
  CHECK(c.documents[1].doc_id == "d2");
  CHECK(c.documents[2].writer_id == "w2");
  CHECK(c.find({"w3", "d1"}) == nullptr);
}

TEST_CASE("the exemplar letter frequency file totals 533") {
  std::ifstream in(std::string(PROJECT_DATA_DIR) +
                   "/london_letter_frequencies.csv");
  REQUIRE(in.good());
  const LetterTemplate t = load_letter_template(in);
  CHECK(t.total() == 533);
  CHECK(t.frequencies.size() == london_letter_template().frequencies.size());
  CHECK(t.frequencies == london_letter_template().frequencies);
}
