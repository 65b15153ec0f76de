#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isoscribe/corpus.hpp"
#include "isoscribe/estimation.hpp"

namespace isoscribe {

enum class ClassifierKind { NaiveBayes, ChiSquared, KlDistance };

std::string classifier_name(ClassifierKind kind);

enum class ScoreKind { LogLikelihood, PValue, KlDistanceValue };

// Which letters enter the KL sum: the union of letters present in either
// document (absent letters contribute through the uniform smoothed
// distribution), or only letters present in both.
enum class KlLetterRange { Union, Intersection };

struct ScoreEntry {
  std::string writer_id;
  std::string doc_id;   // "pooled" for the Naive Bayes classifier
  double value = 0.0;   // log-likelihood, p-value, or KL distance
  double statistic = 0.0;  // fused chi-squared statistic (chi2 only)
  int fused_df = 0;        // fused degrees of freedom (chi2 only)
  bool degenerate = false;  // chi2: candidate shares no isocode variation
};

struct ClassificationResult {
  std::string predicted_writer;
  ScoreKind kind = ScoreKind::LogLikelihood;
  std::vector<ScoreEntry> scores;  // one entry per eligible candidate
  bool tie_broken = false;
};

using ExcludeSet = std::set<DocKey>;

// Sum over letters present in the unknown document of the smoothed
// log-likelihood of the letter's isocode counts under the writer's profile.
// The multinomial coefficient is omitted (constant across writers).
double nb_log_likelihood(const WriterProfile& profile, const Document& unknown);

// Pearson statistic and degrees of freedom for the two-row table of isocode
// counts of one letter across two documents. Columns are the isocodes with
// positive total count in the pair; df = k - 1 for k columns, (0, 0) when
// k = 1. Throws DataError if the letter is absent from either document.
std::pair<double, int> chi2_letter_table(const Document& db_doc,
                                         const Document& unknown, int letter,
                                         std::size_t M);

// Symmetric Kullback-Leibler distance between two strictly positive
// probability vectors of equal length.
double kl_symmetric(std::span<const double> q1, std::span<const double> q2);

struct ClassifierOptions {
  KlLetterRange kl_range = KlLetterRange::Union;
  double prior_scale = kDefaultPriorScale;
};

// Precomputed per-document and per-writer state for repeated classification
// against one corpus (the LOOCV and simulation drivers reuse one context for
// thousands of trials). Immutable after construction; safe for concurrent
// classify() calls. The corpus must outlive the context.
class ClassifierContext {
 public:
  explicit ClassifierContext(const Corpus& corpus,
                             ClassifierOptions options = {});
  ~ClassifierContext();
  ClassifierContext(ClassifierContext&&) noexcept;
  ClassifierContext& operator=(ClassifierContext&&) noexcept;

  ClassificationResult classify(ClassifierKind kind, const Document& unknown,
                                const ExcludeSet& exclude = {}) const;

  const Corpus& corpus() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot entry points; each builds a context and classifies. Use a
// ClassifierContext directly when classifying many documents.
ClassificationResult classify_nb(const Corpus& corpus, const Document& unknown,
                                 const ExcludeSet& exclude = {});
ClassificationResult classify_chi2(const Corpus& corpus,
                                   const Document& unknown,
                                   const ExcludeSet& exclude = {});
ClassificationResult classify_kl(const Corpus& corpus, const Document& unknown,
                                 const ExcludeSet& exclude = {},
                                 KlLetterRange range = KlLetterRange::Union);

}  // namespace isoscribe
