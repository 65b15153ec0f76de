#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "isoscribe/corpus.hpp"
#include "isoscribe/rng.hpp"

namespace isoscribe {

// Synthetic corpus generator. Each writer gets one Dirichlet(alpha) isocode
// distribution per letter; documents repeat the letter template scaled by
// the completeness fraction, with isocodes drawn multinomially from the
// writer's style. Small alpha gives spiky, writer-distinct styles.
struct SynthConfig {
  int writers = 100;
  int docs_per_writer = 3;
  int isocodes = 68;
  double alpha = 0.2;
  double completeness = 1.0;
  std::uint64_t master_seed = 0;
};

// Letter -> occurrence count in the exemplar paragraph.
struct LetterTemplate {
  std::vector<std::pair<std::string, int>> frequencies;
  int total() const;
};

// The 533-character exemplar paragraph frequencies (uppercase, lowercase,
// and digits kept distinct). Matches data/london_letter_frequencies.csv.
const LetterTemplate& london_letter_template();

// CSV with header `letter,frequency`.
LetterTemplate load_letter_template(std::istream& in);

// Dirichlet(alpha, ..., alpha) over M categories via normalized gamma draws.
std::vector<double> sample_dirichlet(RngStream& stream, double alpha,
                                     std::size_t M);

Corpus generate_corpus(const SynthConfig& config,
                       const LetterTemplate& letter_template);

}  // namespace isoscribe
