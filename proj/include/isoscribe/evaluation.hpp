#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isoscribe/classifiers.hpp"
#include "isoscribe/corpus.hpp"
#include "isoscribe/numerics.hpp"
#include "isoscribe/simulation.hpp"

namespace isoscribe {

struct EvalOptions {
  KlLetterRange kl_range = KlLetterRange::Union;
  int jobs = 1;  // worker threads; results are identical for any value
};

struct LoocvReport {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  int trials = 0;
  int correct = 0;
  double accuracy = 0.0;
  struct Miss {
    DocKey doc;
    std::string predicted;
  };
  std::vector<Miss> misclassified;
  // Documents of single-document writers: never tested, still candidates.
  std::vector<DocKey> skipped;
};

// Leave-one-out cross-validation: every document of a writer with at least
// two documents is withheld, classified against the rest, and scored.
// Throws DataError with fewer than two writers.
LoocvReport run_loocv(const Corpus& corpus, ClassifierKind kind,
                      const EvalOptions& options = {});

struct SimulationRecord {
  std::string source_writer;
  std::string source_doc;
  double mu = 0.0;
  int replicate = 0;
  std::int64_t n_chars = 0;
  std::string predicted;
  bool correct = false;
};

struct BinRow {
  double lo = 0.0;                  // exclusive
  double hi = 0.0;                  // inclusive; +inf for the open top bin
  int count = 0;
  int correct = 0;
  std::optional<double> accuracy;   // empty when count == 0
};

// Default bins (0,20], (20,30], (30,40], (40,50], (50,inf).
std::vector<double> default_bin_edges();

// Left-open right-closed bins over n_chars; edges strictly increasing. A
// final open bin above the last edge is always appended.
std::vector<BinRow> bin_accuracy(std::span<const SimulationRecord> records,
                                 std::span<const double> edges);

struct SimulationReport {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  std::vector<SimulationRecord> records;
  std::vector<BinRow> bins;           // default bins
  BinRow comparison_bin_50_83;        // fixed (50, 83] bin for comparability
  LogisticFit fit;                    // accuracy vs character count, pooled over mu
  std::optional<double> size_at_95;   // empty when 0.95 is never reached
};

// Generates one pseudo-document batch and classifies it with each requested
// classifier, excluding only the source document from the candidate set.
std::vector<SimulationReport> run_simulation_study(
    const Corpus& corpus, const SimulationConfig& config,
    std::span<const ClassifierKind> kinds, const EvalOptions& options = {});

// File renderings (formats shared with the CLI).
std::string render_simulation_records_csv(const SimulationReport& report);
std::string render_simulation_summary(const SimulationReport& report);
std::string render_plot_csv(const LogisticFit& fit, int max_size = 200);
std::string render_loocv_report(const LoocvReport& report);

}  // namespace isoscribe
