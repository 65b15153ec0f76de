#include "isoscribe/estimation.hpp"

#include <stdexcept>

#include "isoscribe/kernels.hpp"

namespace isoscribe {

SmoothedDistribution smooth(std::span<const std::int64_t> counts, int letter,
                            double prior_scale) {
  const std::size_t M = counts.size();
  if (M < 2) throw std::domain_error("smooth: need M >= 2");
  if (!(prior_scale > 0.0))
    throw std::domain_error("smooth: prior scale must be positive");

  SmoothedDistribution dist;
  dist.letter = letter;
  dist.probs.resize(M);
  std::int64_t total = 0;
  for (const std::int64_t c : counts) {
    if (c < 0) throw std::domain_error("smooth: negative count");
    total += c;
  }
  dist.support_count = total;

  if (prior_scale == kDefaultPriorScale) {
    std::vector<double> dense(M);
    for (std::size_t m = 0; m < M; ++m) dense[m] = static_cast<double>(counts[m]);
    kernels::active().smooth(dense.data(), M, static_cast<double>(total),
                             dist.probs.data());
  } else {
    const double prior = prior_scale / static_cast<double>(M);
    const double denom = static_cast<double>(total) + prior_scale;
    for (std::size_t m = 0; m < M; ++m)
      dist.probs[m] = (static_cast<double>(counts[m]) + prior) / denom;
  }
  return dist;
}

const SmoothedDistribution& WriterProfile::distribution_for(int letter) const {
  const auto it = distributions.find(letter);
  return it == distributions.end() ? uniform_ : it->second;
}

WriterProfile build_writer_profile(const Corpus& corpus,
                                   const std::string& writer_id,
                                   const std::set<std::string>& exclude,
                                   double prior_scale) {
  const auto it = corpus.writer_index.find(writer_id);
  if (it == corpus.writer_index.end())
    throw DataError("unknown writer: " + writer_id);

  WriterProfile profile;
  profile.writer_id = writer_id;
  profile.M = corpus.alphabets.M();

  bool any = false;
  for (const std::size_t pos : it->second) {
    const Document& doc = corpus.documents[pos];
    if (exclude.contains(doc.doc_id)) continue;
    any = true;
    for (const Cell& c : doc.cells) {
      auto& dense = profile.pooled_counts[c.letter];
      if (dense.empty()) dense.resize(profile.M, 0);
      dense[static_cast<std::size_t>(c.isocode)] += c.count;
    }
  }
  if (!any) throw DataError("empty profile for writer " + writer_id);

  for (const auto& [letter, dense] : profile.pooled_counts)
    profile.distributions[letter] = smooth(dense, letter, prior_scale);
  profile.uniform_ =
      smooth(std::vector<std::int64_t>(profile.M, 0), -1, prior_scale);
  return profile;
}

std::vector<SmoothedDistribution> document_distributions(const Document& doc,
                                                         std::size_t M,
                                                         double prior_scale) {
  std::vector<SmoothedDistribution> dists;
  for (const auto& [letter, cells] : doc.letter_groups()) {
    std::vector<std::int64_t> dense(M, 0);
    for (const Cell& c : cells) dense[static_cast<std::size_t>(c.isocode)] = c.count;
    dists.push_back(smooth(dense, letter, prior_scale));
  }
  return dists;
}

}  // namespace isoscribe
