#include "isoscribe/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace isoscribe {

namespace {

// Runs fn(i) for i in [0, n); each index writes only its own output slot, so
// results are independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min<int>(jobs, static_cast<int>(n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::string format_double(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string bin_label(const BinRow& bin) {
  std::ostringstream out;
  out << '(' << static_cast<long long>(bin.lo) << ',';
  if (std::isinf(bin.hi))
    out << "inf";
  else
    out << static_cast<long long>(bin.hi);
  out << ']';
  return out.str();
}

}  // namespace

LoocvReport run_loocv(const Corpus& corpus, ClassifierKind kind,
                      const EvalOptions& options) {
  if (corpus.writer_count() < 2)
    throw DataError("run_loocv: need at least 2 writers");

  ClassifierOptions copts;
  copts.kl_range = options.kl_range;
  const ClassifierContext ctx(corpus, copts);

  LoocvReport report;
  report.kind = kind;

  std::vector<std::size_t> trial_positions;
  for (const auto& [writer_id, positions] : corpus.writer_index) {
    if (positions.size() < 2) {
      for (const std::size_t pos : positions)
        report.skipped.push_back(
            {corpus.documents[pos].writer_id, corpus.documents[pos].doc_id});
      continue;
    }
    trial_positions.insert(trial_positions.end(), positions.begin(),
                           positions.end());
  }
  std::sort(trial_positions.begin(), trial_positions.end());
  std::sort(report.skipped.begin(), report.skipped.end());

  std::vector<std::string> predictions(trial_positions.size());
  parallel_for(trial_positions.size(), options.jobs, [&](std::size_t i) {
    const Document& doc = corpus.documents[trial_positions[i]];
    const ExcludeSet exclude = {{doc.writer_id, doc.doc_id}};
    predictions[i] = ctx.classify(kind, doc, exclude).predicted_writer;
  });

  report.trials = static_cast<int>(trial_positions.size());
  for (std::size_t i = 0; i < trial_positions.size(); ++i) {
    const Document& doc = corpus.documents[trial_positions[i]];
    if (predictions[i] == doc.writer_id) {
      ++report.correct;
    } else {
      report.misclassified.push_back(
          {{doc.writer_id, doc.doc_id}, predictions[i]});
    }
  }
  report.accuracy = report.trials > 0
                        ? static_cast<double>(report.correct) / report.trials
                        : 0.0;
  return report;
}

std::vector<double> default_bin_edges() { return {0.0, 20.0, 30.0, 40.0, 50.0}; }

std::vector<BinRow> bin_accuracy(std::span<const SimulationRecord> records,
                                 std::span<const double> edges) {
  if (edges.size() < 2)
    throw std::invalid_argument("bin_accuracy: need at least 2 edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1]))
      throw std::invalid_argument("bin_accuracy: edges must be increasing");

  std::vector<BinRow> bins;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    BinRow bin;
    bin.lo = edges[i - 1];
    bin.hi = edges[i];
    bins.push_back(bin);
  }
  BinRow top;
  top.lo = edges.back();
  top.hi = std::numeric_limits<double>::infinity();
  bins.push_back(top);

  for (const SimulationRecord& rec : records) {
    const double n = static_cast<double>(rec.n_chars);
    for (BinRow& bin : bins) {
      if (n > bin.lo && n <= bin.hi) {
        ++bin.count;
        if (rec.correct) ++bin.correct;
        break;
      }
    }
  }
  for (BinRow& bin : bins) {
    if (bin.count > 0)
      bin.accuracy = static_cast<double>(bin.correct) / bin.count;
  }
  return bins;
}

std::vector<SimulationReport> run_simulation_study(
    const Corpus& corpus, const SimulationConfig& config,
    std::span<const ClassifierKind> kinds, const EvalOptions& options) {
  const std::vector<PseudoDocument> batch = pseudo_batch(corpus, config);

  ClassifierOptions copts;
  copts.kl_range = options.kl_range;
  const ClassifierContext ctx(corpus, copts);

  std::vector<SimulationReport> reports;
  for (const ClassifierKind kind : kinds) {
    SimulationReport report;
    report.kind = kind;
    report.records.resize(batch.size());

    parallel_for(batch.size(), options.jobs, [&](std::size_t i) {
      const PseudoDocument& pd = batch[i];
      const ExcludeSet exclude = {{pd.source_writer, pd.source_doc}};
      const ClassificationResult res = ctx.classify(kind, pd.doc, exclude);
      SimulationRecord& rec = report.records[i];
      rec.source_writer = pd.source_writer;
      rec.source_doc = pd.source_doc;
      rec.mu = pd.mu;
      rec.replicate = pd.replicate;
      rec.n_chars = pd.doc.character_count();
      rec.predicted = res.predicted_writer;
      rec.correct = res.predicted_writer == pd.source_writer;
    });

    const auto edges = default_bin_edges();
    report.bins = bin_accuracy(report.records, edges);
    const std::vector<double> paper_edges = {50.0, 83.0};
    report.comparison_bin_50_83 = bin_accuracy(report.records, paper_edges)[0];

    std::vector<double> x(report.records.size());
    std::vector<int> y(report.records.size());
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      x[i] = static_cast<double>(report.records[i].n_chars);
      y[i] = report.records[i].correct ? 1 : 0;
    }
    try {
      report.fit = fit_logistic(x, y);
    } catch (const std::invalid_argument&) {
      // Degenerate design (all sizes equal); leave a non-converged fit.
    }

    if (report.fit.converged) {
      const double target = std::log(0.95 / 0.05);
      if (report.fit.slope > 0.0) {
        report.size_at_95 =
            std::max(0.0, (target - report.fit.intercept) / report.fit.slope);
      } else if (report.fit.intercept >= target) {
        report.size_at_95 = 0.0;
      }
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string render_simulation_records_csv(const SimulationReport& report) {
  std::ostringstream out;
  out << "classifier,source_writer,source_doc,mu,rep,n_chars,predicted,correct\n";
  const std::string name = classifier_name(report.kind);
  for (const SimulationRecord& rec : report.records) {
    out << name << ',' << rec.source_writer << ',' << rec.source_doc << ','
        << format_mu(rec.mu) << ',' << rec.replicate << ',' << rec.n_chars
        << ',' << rec.predicted << ',' << (rec.correct ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string render_simulation_summary(const SimulationReport& report) {
  std::ostringstream out;
  out << "classifier: " << classifier_name(report.kind) << '\n';
  out << "trials: " << report.records.size() << '\n';
  int correct = 0;
  for (const SimulationRecord& rec : report.records)
    if (rec.correct) ++correct;
  out << "correct: " << correct << '\n';
  out << "\nbin,count,correct,accuracy\n";
  for (const BinRow& bin : report.bins) {
    out << bin_label(bin) << ',' << bin.count << ',' << bin.correct << ',';
    out << (bin.accuracy ? format_double(*bin.accuracy, 4) : "n/a") << '\n';
  }
  const BinRow& cmp = report.comparison_bin_50_83;
  out << "comparison " << bin_label(cmp) << ',' << cmp.count << ','
      << cmp.correct << ','
      << (cmp.accuracy ? format_double(*cmp.accuracy, 4) : "n/a") << '\n';
  out << "\nlogistic_converged: " << (report.fit.converged ? 1 : 0) << '\n';
  out << "logistic_separation: " << (report.fit.separation_detected ? 1 : 0)
      << '\n';
  if (report.fit.converged) {
    out << "logistic_intercept: " << format_double(report.fit.intercept) << '\n';
    out << "logistic_slope: " << format_double(report.fit.slope) << '\n';
    out << "logistic_intercept_se: " << format_double(report.fit.intercept_se)
        << '\n';
    out << "logistic_slope_se: " << format_double(report.fit.slope_se) << '\n';
  }
  out << "size_at_95_accuracy: "
      << (report.size_at_95 ? format_double(*report.size_at_95, 2)
                            : std::string("not reached"))
      << '\n';
  return out.str();
}

std::string render_plot_csv(const LogisticFit& fit, int max_size) {
  std::ostringstream out;
  out << "size,fitted_accuracy\n";
  if (!fit.converged) return out.str();
  for (int s = 1; s <= max_size; ++s)
    out << s << ',' << format_double(predict_accuracy(fit, s)) << '\n';
  return out.str();
}

std::string render_loocv_report(const LoocvReport& report) {
  std::ostringstream out;
  out << "classifier: " << classifier_name(report.kind) << '\n';
  out << "trials: " << report.trials << '\n';
  out << "correct: " << report.correct << '\n';
  out << "accuracy: " << format_double(report.accuracy) << '\n';
  out << "skipped: " << report.skipped.size() << '\n';
  for (const DocKey& key : report.skipped)
    out << "skipped_doc: " << key.writer_id << ',' << key.doc_id << '\n';
  out << "misclassified: " << report.misclassified.size() << '\n';
  for (const auto& miss : report.misclassified)
    out << "miss: " << miss.doc.writer_id << ',' << miss.doc.doc_id
        << " -> " << miss.predicted << '\n';
  return out.str();
}

}  // namespace isoscribe
