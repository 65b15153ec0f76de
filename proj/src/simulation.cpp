#include "isoscribe/simulation.hpp"

#include <cmath>

#include "isoscribe/estimation.hpp"
#include "isoscribe/numerics.hpp"

namespace isoscribe {

std::string format_mu(double mu) {
  // Shortest decimal form, e.g. "1", "1.5", "0.25".
  std::string s = std::to_string(mu);
  while (s.find('.') != std::string::npos && (s.back() == '0')) s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

PseudoDocument generate_pseudo_document(const Document& source, double mu,
                                        RngStream& stream, std::size_t M,
                                        int redraw_limit) {
  if (source.character_count() < 1)
    throw DataError("generate_pseudo_document: empty source document");
  if (redraw_limit < 1)
    throw std::domain_error("generate_pseudo_document: redraw limit must be positive");

  const auto dists = document_distributions(source, M);

  PseudoDocument out;
  out.source_writer = source.writer_id;
  out.source_doc = source.doc_id;
  out.mu = mu;

  for (int attempt = 0; attempt < redraw_limit; ++attempt) {
    std::vector<Cell> cells;
    for (const SmoothedDistribution& dist : dists) {
      const std::int64_t x = sample_poisson(stream, mu);
      if (x == 0) continue;
      const auto counts = sample_multinomial(stream, x, dist.probs);
      for (std::size_t m = 0; m < counts.size(); ++m) {
        if (counts[m] > 0)
          cells.push_back({dist.letter, static_cast<int>(m), counts[m]});
      }
    }
    if (!cells.empty()) {
      out.redraws = attempt;
      out.doc.writer_id = kUnknownWriter;
      out.doc.doc_id = source.writer_id + "." + source.doc_id;
      out.doc.cells = std::move(cells);
      out.doc.sort_cells();
      return out;
    }
  }
  throw DataError("degenerate pseudo-document: redraw limit exhausted for " +
                  source.writer_id + "," + source.doc_id);
}

std::vector<PseudoDocument> pseudo_batch(const Corpus& corpus,
                                         const SimulationConfig& config) {
  std::vector<PseudoDocument> batch;
  const std::size_t M = corpus.alphabets.M();
  for (const auto& [writer_id, positions] : corpus.writer_index) {
    if (positions.size() < 2) continue;  // single-document writers are not sources
    for (const std::size_t pos : positions) {
      const Document& source = corpus.documents[pos];
      for (const double mu : config.mu_values) {
        for (int rep = 0; rep < config.replicates_per_mu; ++rep) {
          const std::string label = "pseudo/" + source.writer_id + "/" +
                                    source.doc_id + "/" + format_mu(mu) + "/" +
                                    std::to_string(rep);
          RngStream stream(config.master_seed, label);
          PseudoDocument pd = generate_pseudo_document(
              source, mu, stream, M, config.redraw_limit);
          pd.replicate = rep;
          pd.doc.doc_id = source.writer_id + "." + source.doc_id + "." +
                          format_mu(mu) + "." + std::to_string(rep);
          batch.push_back(std::move(pd));
        }
      }
    }
  }
  return batch;
}

}  // namespace isoscribe
