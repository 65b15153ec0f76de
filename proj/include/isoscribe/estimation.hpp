#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "isoscribe/corpus.hpp"

namespace isoscribe {

// Posterior-mean isocode distribution for one letter under a symmetric
// Dirichlet prior: entry m = (count_m + prior) / (total + M * prior) with
// prior = 1/M by default, i.e. (count_m + 1/M) / (total + 1).
struct SmoothedDistribution {
  int letter = -1;
  std::vector<double> probs;        // strictly positive, sums to 1
  std::int64_t support_count = 0;   // total raw count behind the estimate
};

// Default Dirichlet shape: all M parameters equal to 1/M.
inline constexpr double kDefaultPriorScale = 1.0;

// counts is the dense length-M vector for one letter; M = counts.size() >= 2.
// prior_scale rescales the 1/M shape (prior = prior_scale / M); the default
// matches the standard estimator.
SmoothedDistribution smooth(std::span<const std::int64_t> counts,
                            int letter = -1,
                            double prior_scale = kDefaultPriorScale);

// Pooled counts across a writer's documents, with one smoothed distribution
// per letter. Letters with no pooled counts fall back to the uniform
// distribution (the estimator at total = 0).
struct WriterProfile {
  std::string writer_id;
  std::size_t M = 0;
  // letter -> dense pooled counts (only letters with positive counts)
  std::map<int, std::vector<std::int64_t>> pooled_counts;
  std::map<int, SmoothedDistribution> distributions;

  // Uniform 1/M for letters absent from the pooled sample.
  const SmoothedDistribution& distribution_for(int letter) const;

 private:
  friend WriterProfile build_writer_profile(const Corpus&, const std::string&,
                                            const std::set<std::string>&,
                                            double);
  SmoothedDistribution uniform_;
};

// Pools the writer's documents, skipping doc ids in `exclude`, and smooths
// per letter. Throws DataError if the writer is unknown or every document is
// excluded.
WriterProfile build_writer_profile(const Corpus& corpus,
                                   const std::string& writer_id,
                                   const std::set<std::string>& exclude = {},
                                   double prior_scale = kDefaultPriorScale);

// One smoothed distribution per letter with positive count in the document.
std::vector<SmoothedDistribution> document_distributions(
    const Document& doc, std::size_t M,
    double prior_scale = kDefaultPriorScale);

}  // namespace isoscribe
