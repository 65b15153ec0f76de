#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isoscribe/corpus.hpp"
#include "isoscribe/rng.hpp"

namespace isoscribe {

struct SimulationConfig {
  std::vector<double> mu_values = {1.0, 1.5, 2.0};
  int replicates_per_mu = 3;
  std::uint64_t master_seed = 0;
  int redraw_limit = 100;
};

// A simulated document: per source letter, a Poisson(mu) number of isocodes
// drawn from the source letter's smoothed distribution. Letters unobserved
// in the source never appear.
struct PseudoDocument {
  std::string source_writer;
  std::string source_doc;
  double mu = 0.0;
  int replicate = 0;
  Document doc;  // writer_id "?", doc_id "<writer>.<doc>.<mu>.<rep>"
  int redraws = 0;
};

std::string format_mu(double mu);

// Throws DataError once redraw_limit whole-document redraws all come out
// empty.
PseudoDocument generate_pseudo_document(const Document& source, double mu,
                                        RngStream& stream, std::size_t M,
                                        int redraw_limit = 100);

// Pseudo-documents for every source document of a writer with at least two
// documents: |mu_values| x replicates_per_mu per source, in deterministic
// (doc key, mu, replicate) order. Each draw uses a stream derived from
// (master_seed, doc key, mu, replicate).
std::vector<PseudoDocument> pseudo_batch(const Corpus& corpus,
                                         const SimulationConfig& config);

}  // namespace isoscribe
