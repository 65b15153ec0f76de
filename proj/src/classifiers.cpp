#include "isoscribe/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "isoscribe/kernels.hpp"
#include "isoscribe/numerics.hpp"

namespace isoscribe {

std::string classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::NaiveBayes:
      return "nb";
    case ClassifierKind::ChiSquared:
      return "cs";
    case ClassifierKind::KlDistance:
      return "kl";
  }
  return "unknown";
}

double nb_log_likelihood(const WriterProfile& profile,
                         const Document& unknown) {
  double score = 0.0;
  for (const auto& [letter, cells] : unknown.letter_groups()) {
    const SmoothedDistribution& dist = profile.distribution_for(letter);
    for (const Cell& c : cells)
      score += static_cast<double>(c.count) *
               std::log(dist.probs[static_cast<std::size_t>(c.isocode)]);
  }
  return score;
}

std::pair<double, int> chi2_letter_table(const Document& db_doc,
                                         const Document& unknown, int letter,
                                         std::size_t M) {
  if (!db_doc.has_letter(letter) || !unknown.has_letter(letter))
    throw DataError("chi2_letter_table: letter absent from a document");
  const auto a = db_doc.letter_counts(letter, M);
  const auto b = unknown.letter_counts(letter, M);
  std::vector<double> r1, r2;
  double n1 = 0.0, n2 = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    if (a[m] + b[m] > 0) {
      r1.push_back(static_cast<double>(a[m]));
      r2.push_back(static_cast<double>(b[m]));
      n1 += static_cast<double>(a[m]);
      n2 += static_cast<double>(b[m]);
    }
  }
  if (r1.size() <= 1) return {0.0, 0};
  const double stat =
      kernels::active().chi2_two_row(r1.data(), r2.data(), r1.size(), n1, n2);
  return {stat, static_cast<int>(r1.size()) - 1};
}

double kl_symmetric(std::span<const double> q1, std::span<const double> q2) {
  if (q1.size() != q2.size())
    throw std::invalid_argument("kl_symmetric: size mismatch");
  double acc = 0.0;
  for (std::size_t m = 0; m < q1.size(); ++m) {
    if (!(q1[m] > 0.0) || !(q2[m] > 0.0))
      throw std::domain_error("kl_symmetric: entries must be positive");
    acc += q2[m] * std::log(q2[m] / q1[m]) + q1[m] * std::log(q1[m] / q2[m]);
  }
  return 0.5 * acc;
}

namespace {

struct LetterData {
  int letter = -1;
  std::vector<double> counts;  // dense, length M
  double total = 0.0;
  std::vector<double> q, logq;  // smoothed distribution and its logs
};

std::vector<double> log_of(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log(v[i]);
  return out;
}

struct DocData {
  DocKey key;
  std::vector<LetterData> letters;  // sorted by letter index

  const LetterData* find(int letter) const {
    const auto it = std::lower_bound(
        letters.begin(), letters.end(), letter,
        [](const LetterData& d, int l) { return d.letter < l; });
    return (it != letters.end() && it->letter == letter) ? &*it : nullptr;
  }
};

DocData make_doc_data(const Document& doc, std::size_t M, double prior_scale) {
  DocData data;
  data.key = {doc.writer_id, doc.doc_id};
  for (const auto& [letter, cells] : doc.letter_groups()) {
    LetterData ld;
    ld.letter = letter;
    ld.counts.assign(M, 0.0);
    std::vector<std::int64_t> dense(M, 0);
    for (const Cell& c : cells) {
      ld.counts[static_cast<std::size_t>(c.isocode)] =
          static_cast<double>(c.count);
      dense[static_cast<std::size_t>(c.isocode)] = c.count;
      ld.total += static_cast<double>(c.count);
    }
    ld.q = smooth(dense, letter, prior_scale).probs;
    ld.logq = log_of(ld.q);
    data.letters.push_back(std::move(ld));
  }
  return data;
}

struct WriterData {
  std::string id;
  std::vector<std::size_t> doc_positions;
  // Global (no-exclusion) per-letter log smoothed distributions.
  std::map<int, std::vector<double>> logq;
};

}  // namespace

struct ClassifierContext::Impl {
  const Corpus* corpus = nullptr;
  ClassifierOptions opts;
  std::size_t M = 0;
  std::vector<DocData> docs;  // parallel to corpus->documents
  std::vector<WriterData> writers;
  std::vector<double> uniform_q, uniform_logq;
  double log_uniform = 0.0;

  ClassificationResult classify_nb(const Document& unknown,
                                   const ExcludeSet& exclude) const;
  ClassificationResult classify_cs(const DocData& unknown,
                                   const ExcludeSet& exclude) const;
  ClassificationResult classify_kl(const DocData& unknown,
                                   const ExcludeSet& exclude) const;
};

ClassifierContext::ClassifierContext(const Corpus& corpus,
                                     ClassifierOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->corpus = &corpus;
  impl_->opts = options;
  impl_->M = corpus.alphabets.M();
  if (impl_->M < 2) throw DataError("classifier context: need M >= 2");

  impl_->docs.reserve(corpus.documents.size());
  for (const Document& doc : corpus.documents)
    impl_->docs.push_back(make_doc_data(doc, impl_->M, options.prior_scale));

  impl_->uniform_q = smooth(std::vector<std::int64_t>(impl_->M, 0), -1,
                            options.prior_scale)
                         .probs;
  impl_->uniform_logq = log_of(impl_->uniform_q);
  impl_->log_uniform = impl_->uniform_logq[0];

  for (const auto& [writer_id, positions] : corpus.writer_index) {
    WriterData wd;
    wd.id = writer_id;
    wd.doc_positions = positions;
    const WriterProfile profile =
        build_writer_profile(corpus, writer_id, {}, options.prior_scale);
    for (const auto& [letter, dist] : profile.distributions)
      wd.logq[letter] = log_of(dist.probs);
    impl_->writers.push_back(std::move(wd));
  }
}

ClassifierContext::~ClassifierContext() = default;
ClassifierContext::ClassifierContext(ClassifierContext&&) noexcept = default;
ClassifierContext& ClassifierContext::operator=(ClassifierContext&&) noexcept =
    default;

const Corpus& ClassifierContext::corpus() const { return *impl_->corpus; }

ClassificationResult ClassifierContext::Impl::classify_nb(
    const Document& unknown, const ExcludeSet& exclude) const {
  // Dense per-letter counts of the unknown document.
  std::vector<std::pair<int, std::pair<std::vector<double>, double>>> unk;
  for (const auto& [letter, cells] : unknown.letter_groups()) {
    std::vector<double> dense(M, 0.0);
    double total = 0.0;
    for (const Cell& c : cells) {
      dense[static_cast<std::size_t>(c.isocode)] = static_cast<double>(c.count);
      total += static_cast<double>(c.count);
    }
    unk.emplace_back(letter, std::make_pair(std::move(dense), total));
  }

  const auto& ops = kernels::active();
  ClassificationResult result;
  result.kind = ScoreKind::LogLikelihood;

  for (const WriterData& wd : writers) {
    // Writers with excluded documents get their profile re-pooled.
    std::set<std::string> writer_excluded;
    std::size_t remaining = wd.doc_positions.size();
    for (const std::size_t pos : wd.doc_positions) {
      if (exclude.contains(docs[pos].key)) {
        writer_excluded.insert(docs[pos].key.doc_id);
        --remaining;
      }
    }
    if (remaining == 0) continue;

    const std::map<int, std::vector<double>>* logq = &wd.logq;
    std::map<int, std::vector<double>> local;
    if (!writer_excluded.empty()) {
      const WriterProfile profile = build_writer_profile(
          *corpus, wd.id, writer_excluded, opts.prior_scale);
      for (const auto& [letter, dist] : profile.distributions)
        local[letter] = log_of(dist.probs);
      logq = &local;
    }

    double score = 0.0;
    for (const auto& [letter, data] : unk) {
      const auto it = logq->find(letter);
      if (it == logq->end())
        score += data.second * log_uniform;
      else
        score += ops.dot(data.first.data(), it->second.data(), M);
    }
    result.scores.push_back({wd.id, "pooled", score});
  }

  if (result.scores.empty()) throw DataError("no candidate writers");

  std::size_t best = 0;
  int ties = 1;
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    if (result.scores[i].value > result.scores[best].value) {
      best = i;
      ties = 1;
    } else if (result.scores[i].value == result.scores[best].value) {
      ++ties;  // writers are iterated in ascending id order
    }
  }
  result.predicted_writer = result.scores[best].writer_id;
  result.tie_broken = ties > 1;
  return result;
}

ClassificationResult ClassifierContext::Impl::classify_cs(
    const DocData& unknown, const ExcludeSet& exclude) const {
  const auto& ops = kernels::active();
  ClassificationResult result;
  result.kind = ScoreKind::PValue;

  std::vector<double> r1, r2;
  r1.reserve(M);
  r2.reserve(M);
  bool any_shared = false;

  for (const DocData& cand : docs) {
    if (cand.key.writer_id == kUnknownWriter) continue;
    if (exclude.contains(cand.key)) continue;

    double stat = 0.0;
    int df = 0;
    bool shared = false;
    for (const LetterData& cl : cand.letters) {
      const LetterData* ul = unknown.find(cl.letter);
      if (!ul) continue;
      shared = true;
      r1.clear();
      r2.clear();
      for (std::size_t m = 0; m < M; ++m) {
        if (cl.counts[m] > 0.0 || ul->counts[m] > 0.0) {
          r1.push_back(cl.counts[m]);
          r2.push_back(ul->counts[m]);
        }
      }
      if (r1.size() > 1) {
        stat += ops.chi2_two_row(r1.data(), r2.data(), r1.size(), cl.total,
                                 ul->total);
        df += static_cast<int>(r1.size()) - 1;
      }
    }
    any_shared = any_shared || shared;

    ScoreEntry entry;
    entry.writer_id = cand.key.writer_id;
    entry.doc_id = cand.key.doc_id;
    entry.statistic = stat;
    entry.fused_df = df;
    entry.value = df > 0 ? chi2_sf(stat, df) : 1.0;
    entry.degenerate = !shared;
    result.scores.push_back(std::move(entry));
  }

  if (result.scores.empty()) throw DataError("no candidate documents");
  if (!any_shared) throw DataError("no comparable documents");

  // Largest p wins; ties go to larger fused df, then smallest ids (candidate
  // order is already ascending by writer then doc).
  std::size_t best = 0;
  int ties = 1;
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    const ScoreEntry& e = result.scores[i];
    const ScoreEntry& b = result.scores[best];
    if (e.value > b.value) {
      best = i;
      ties = 1;
    } else if (e.value == b.value) {
      ++ties;
      if (e.fused_df > b.fused_df) best = i;
    }
  }
  result.predicted_writer = result.scores[best].writer_id;
  result.tie_broken = ties > 1;
  return result;
}

ClassificationResult ClassifierContext::Impl::classify_kl(
    const DocData& unknown, const ExcludeSet& exclude) const {
  const auto& ops = kernels::active();
  const bool intersection = opts.kl_range == KlLetterRange::Intersection;
  ClassificationResult result;
  result.kind = ScoreKind::KlDistanceValue;

  for (const DocData& cand : docs) {
    if (cand.key.writer_id == kUnknownWriter) continue;
    if (exclude.contains(cand.key)) continue;

    double delta = 0.0;
    // Merge the two sorted letter lists.
    std::size_t i = 0, j = 0;
    while (i < cand.letters.size() || j < unknown.letters.size()) {
      const int lc = i < cand.letters.size() ? cand.letters[i].letter
                                             : std::numeric_limits<int>::max();
      const int lu = j < unknown.letters.size()
                         ? unknown.letters[j].letter
                         : std::numeric_limits<int>::max();
      if (lc == lu) {
        const LetterData& c = cand.letters[i];
        const LetterData& u = unknown.letters[j];
        delta += ops.sym_kl(c.q.data(), c.logq.data(), u.q.data(),
                            u.logq.data(), M);
        ++i;
        ++j;
      } else if (lc < lu) {
        if (!intersection)
          delta += ops.sym_kl(cand.letters[i].q.data(),
                              cand.letters[i].logq.data(), uniform_q.data(),
                              uniform_logq.data(), M);
        ++i;
      } else {
        if (!intersection)
          delta += ops.sym_kl(uniform_q.data(), uniform_logq.data(),
                              unknown.letters[j].q.data(),
                              unknown.letters[j].logq.data(), M);
        ++j;
      }
    }
    result.scores.push_back({cand.key.writer_id, cand.key.doc_id, delta});
  }

  if (result.scores.empty()) throw DataError("no candidate documents");

  std::size_t best = 0;
  int ties = 1;
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    if (result.scores[i].value < result.scores[best].value) {
      best = i;
      ties = 1;
    } else if (result.scores[i].value == result.scores[best].value) {
      ++ties;
    }
  }
  result.predicted_writer = result.scores[best].writer_id;
  result.tie_broken = ties > 1;
  return result;
}

ClassificationResult ClassifierContext::classify(ClassifierKind kind,
                                                 const Document& unknown,
                                                 const ExcludeSet& exclude)
    const {
  switch (kind) {
    case ClassifierKind::NaiveBayes:
      return impl_->classify_nb(unknown, exclude);
    case ClassifierKind::ChiSquared:
      return impl_->classify_cs(
          make_doc_data(unknown, impl_->M, impl_->opts.prior_scale), exclude);
    case ClassifierKind::KlDistance:
      return impl_->classify_kl(
          make_doc_data(unknown, impl_->M, impl_->opts.prior_scale), exclude);
  }
  throw std::invalid_argument("unknown classifier kind");
}

ClassificationResult classify_nb(const Corpus& corpus, const Document& unknown,
                                 const ExcludeSet& exclude) {
  return ClassifierContext(corpus).classify(ClassifierKind::NaiveBayes,
                                            unknown, exclude);
}

ClassificationResult classify_chi2(const Corpus& corpus,
                                   const Document& unknown,
                                   const ExcludeSet& exclude) {
  return ClassifierContext(corpus).classify(ClassifierKind::ChiSquared,
                                            unknown, exclude);
}

ClassificationResult classify_kl(const Corpus& corpus, const Document& unknown,
                                 const ExcludeSet& exclude,
                                 KlLetterRange range) {
  ClassifierOptions options;
  options.kl_range = range;
  return ClassifierContext(corpus, options)
      .classify(ClassifierKind::KlDistance, unknown, exclude);
}

}  // namespace isoscribe
