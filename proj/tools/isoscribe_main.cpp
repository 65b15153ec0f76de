#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isoscribe/classifiers.hpp"
#include "isoscribe/corpus.hpp"
#include "isoscribe/evaluation.hpp"
#include "isoscribe/simulation.hpp"
#include "isoscribe/synthgen.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace isoscribe;

namespace {

constexpr const char* kVersion = "isoscribe 0.1.0";

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << content;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int default_jobs() {
  if (const char* env = std::getenv("ISOSCRIBE_JOBS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

ClassifierKind parse_classifier(const std::string& name) {
  if (name == "nb") return ClassifierKind::NaiveBayes;
  if (name == "cs") return ClassifierKind::ChiSquared;
  if (name == "kl") return ClassifierKind::KlDistance;
  throw DataError("unknown classifier '" + name + "', expected one of {nb, cs, kl}");
}

Corpus load_corpus(const fs::path& path, const std::string& sidecar_path) {
  std::optional<Alphabets> sidecar;
  if (!sidecar_path.empty()) {
    std::ifstream sc(sidecar_path);
    if (!sc) throw DataError("cannot open sidecar: " + sidecar_path);
    sidecar = parse_alphabet_sidecar(sc);
  }
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus: " + path.string());
  return parse_corpus(in, sidecar);
}

json manifest_base(const std::string& command) {
  json m;
  m["command"] = command;
  m["tool_version"] = kVersion;
  return m;
}

void add_input_digest(json& manifest, const fs::path& path) {
  manifest["inputs"][path.string()] = fnv1a64_hex(read_file(path));
}

void finish_manifest(json& manifest, const fs::path& dir,
                     const std::vector<fs::path>& outputs) {
  json list = json::array();
  for (const fs::path& p : outputs) {
    list.push_back(p.filename().string());
    manifest["output_digests"][p.filename().string()] =
        fnv1a64_hex(read_file(p));
  }
  manifest["outputs"] = list;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

struct SynthArgs {
  int writers = 100;
  int docs = 3;
  int isocodes = 68;
  double alpha = 0.2;
  double completeness = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string template_path;
};

int cmd_synth(const SynthArgs& args) {
  SynthConfig config;
  config.writers = args.writers;
  config.docs_per_writer = args.docs;
  config.isocodes = args.isocodes;
  config.alpha = args.alpha;
  config.completeness = args.completeness;
  config.master_seed = args.seed;

  LetterTemplate tmpl;
  if (!args.template_path.empty()) {
    std::ifstream in(args.template_path);
    if (!in) throw DataError("cannot open template: " + args.template_path);
    tmpl = load_letter_template(in);
  } else {
    tmpl = london_letter_template();
  }

  const Corpus corpus = generate_corpus(config, tmpl);
  const fs::path out_path(args.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_file(out_path, serialize_corpus(corpus));
  const fs::path sidecar_path = out_path.string() + ".alphabets";
  write_file(sidecar_path, serialize_alphabet_sidecar(corpus.alphabets));

  json manifest = manifest_base("synth");
  manifest["config"] = {{"writers", args.writers},
                        {"docs", args.docs},
                        {"isocodes", args.isocodes},
                        {"alpha", args.alpha},
                        {"completeness", args.completeness}};
  manifest["master_seed"] = args.seed;
  if (!args.template_path.empty()) add_input_digest(manifest, args.template_path);
  const fs::path dir =
      out_path.has_parent_path() ? out_path.parent_path() : fs::path(".");
  finish_manifest(manifest, dir, {out_path, sidecar_path});
  std::cout << "wrote " << out_path.string() << " ("
            << corpus.documents.size() << " documents, "
            << corpus.writer_count() << " writers)\n";
  return 0;
}

struct ClassifyArgs {
  std::string db;
  std::string unknown;
  std::string classifier;
  std::string alphabets;
  std::string kl_range = "union";
  bool scores = false;
};

int cmd_classify(const ClassifyArgs& args) {
  const ClassifierKind kind = parse_classifier(args.classifier);
  const Corpus db = load_corpus(args.db, args.alphabets);

  // The unknown file must use the database alphabets so the smoothing
  // constant M matches; unseen symbols are an alphabet mismatch.
  std::ifstream in(args.unknown);
  if (!in) throw DataError("cannot open corpus: " + args.unknown);
  Corpus unknown_corpus;
  try {
    unknown_corpus = parse_corpus(in, db.alphabets);
  } catch (const ParseError& e) {
    throw DataError("alphabet mismatch between files: " + std::string(e.what()));
  }

  ClassifierOptions options;
  options.kl_range = args.kl_range == "intersection"
                         ? KlLetterRange::Intersection
                         : KlLetterRange::Union;
  const ClassifierContext ctx(db, options);

  for (const Document& doc : unknown_corpus.documents) {
    const ClassificationResult result = ctx.classify(kind, doc);
    // The winner's optimal entry (per-document classifiers may list several
    // documents for the predicted writer).
    double best_value = 0.0;
    bool first = true;
    for (const ScoreEntry& e : result.scores) {
      if (e.writer_id != result.predicted_writer) continue;
      if (first) {
        best_value = e.value;
        first = false;
        continue;
      }
      if (result.kind == ScoreKind::KlDistanceValue)
        best_value = std::min(best_value, e.value);
      else
        best_value = std::max(best_value, e.value);
    }
    std::printf("%s,%s,%.10g,%d\n", doc.doc_id.c_str(),
                result.predicted_writer.c_str(), best_value,
                result.tie_broken ? 1 : 0);
    if (args.scores) {
      for (const ScoreEntry& e : result.scores)
        std::printf("  %s,%s,%.10g\n", e.writer_id.c_str(), e.doc_id.c_str(),
                    e.value);
    }
  }
  return 0;
}

struct StudyArgs {
  std::string db;
  std::string alphabets;
  std::vector<std::string> classifiers;
  std::string out_dir;
  std::string kl_range = "union";
  int jobs = 0;
  // simulate only:
  std::vector<double> mu = {1.0, 1.5, 2.0};
  int reps = 3;
  std::uint64_t seed = 0;
};

EvalOptions make_eval_options(const StudyArgs& args) {
  EvalOptions options;
  options.jobs = args.jobs > 0 ? args.jobs : default_jobs();
  options.kl_range = args.kl_range == "intersection"
                         ? KlLetterRange::Intersection
                         : KlLetterRange::Union;
  return options;
}

int cmd_loocv(const StudyArgs& args) {
  const Corpus corpus = load_corpus(args.db, args.alphabets);
  const EvalOptions options = make_eval_options(args);
  fs::create_directories(args.out_dir);

  std::vector<fs::path> outputs;
  std::ostringstream combined;
  for (const std::string& name : args.classifiers) {
    const ClassifierKind kind = parse_classifier(name);
    const LoocvReport report = run_loocv(corpus, kind, options);
    const fs::path path = fs::path(args.out_dir) / ("loocv_" + name + ".txt");
    write_file(path, render_loocv_report(report));
    outputs.push_back(path);
    combined << name << ": " << report.correct << "/" << report.trials
             << " accuracy " << report.accuracy << "\n";
  }
  const fs::path summary = fs::path(args.out_dir) / "summary.txt";
  write_file(summary, combined.str());
  outputs.push_back(summary);

  json manifest = manifest_base("loocv");
  manifest["config"] = {{"classifiers", args.classifiers},
                        {"kl_range", args.kl_range}};
  add_input_digest(manifest, args.db);
  if (!args.alphabets.empty()) add_input_digest(manifest, args.alphabets);
  finish_manifest(manifest, args.out_dir, outputs);
  std::cout << combined.str();
  return 0;
}

int cmd_simulate(const StudyArgs& args) {
  const Corpus corpus = load_corpus(args.db, args.alphabets);
  const EvalOptions options = make_eval_options(args);
  fs::create_directories(args.out_dir);

  SimulationConfig config;
  config.mu_values = args.mu;
  config.replicates_per_mu = args.reps;
  config.master_seed = args.seed;

  std::vector<ClassifierKind> kinds;
  for (const std::string& name : args.classifiers)
    kinds.push_back(parse_classifier(name));

  const auto reports = run_simulation_study(corpus, config, kinds, options);

  std::vector<fs::path> outputs;
  for (const SimulationReport& report : reports) {
    const std::string name = classifier_name(report.kind);
    const fs::path records = fs::path(args.out_dir) / ("records_" + name + ".csv");
    const fs::path summary = fs::path(args.out_dir) / ("summary_" + name + ".txt");
    const fs::path plot = fs::path(args.out_dir) / ("plot_" + name + ".csv");
    write_file(records, render_simulation_records_csv(report));
    write_file(summary, render_simulation_summary(report));
    write_file(plot, render_plot_csv(report.fit));
    outputs.push_back(records);
    outputs.push_back(summary);
    outputs.push_back(plot);
    std::cout << name << ": " << report.records.size() << " records\n";
  }

  json manifest = manifest_base("simulate");
  json mu_list = json::array();
  for (const double m : args.mu) mu_list.push_back(m);
  manifest["config"] = {{"classifiers", args.classifiers},
                        {"mu", mu_list},
                        {"reps", args.reps},
                        {"kl_range", args.kl_range}};
  manifest["master_seed"] = args.seed;
  add_input_digest(manifest, args.db);
  if (!args.alphabets.empty()) add_input_digest(manifest, args.alphabets);
  finish_manifest(manifest, args.out_dir, outputs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Writer identification from letter/isocode count data"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--writers", synth.writers, "Number of writers");
  synth_cmd->add_option("--docs", synth.docs, "Documents per writer");
  synth_cmd->add_option("--isocodes", synth.isocodes, "Isocode alphabet size");
  synth_cmd->add_option("--alpha", synth.alpha,
                        "Dirichlet concentration (small = distinct styles)");
  synth_cmd->add_option("--completeness", synth.completeness,
                        "Template scale fraction in (0,1]");
  synth_cmd->add_option("--seed", synth.seed, "Master seed");
  synth_cmd->add_option("--out", synth.out, "Output corpus CSV path")
      ->required();
  synth_cmd->add_option("--template", synth.template_path,
                        "Letter frequency template CSV");

  ClassifyArgs classify;
  CLI::App* classify_cmd =
      app.add_subcommand("classify", "Classify unknown documents");
  classify_cmd->add_option("--db", classify.db, "Database corpus CSV")
      ->required();
  classify_cmd
      ->add_option("--unknown", classify.unknown,
                   "Corpus CSV of unknown documents (writer '?')")
      ->required();
  classify_cmd
      ->add_option("--classifier", classify.classifier, "One of nb, cs, kl")
      ->required();
  classify_cmd->add_option("--alphabets", classify.alphabets,
                           "Alphabet sidecar file");
  classify_cmd->add_option("--kl-range", classify.kl_range,
                           "KL letter range: union or intersection");
  classify_cmd->add_flag("--scores", classify.scores,
                         "Print the full ranked score list");

  StudyArgs loocv;
  CLI::App* loocv_cmd =
      app.add_subcommand("loocv", "Leave-one-out cross-validation");
  loocv_cmd->add_option("--db", loocv.db, "Database corpus CSV")->required();
  loocv_cmd->add_option("--alphabets", loocv.alphabets, "Alphabet sidecar file");
  loocv_cmd
      ->add_option("--classifier", loocv.classifiers,
                   "Classifier (repeatable): nb, cs, kl")
      ->required();
  loocv_cmd->add_option("--out-dir", loocv.out_dir, "Output directory")
      ->required();
  loocv_cmd->add_option("--jobs", loocv.jobs, "Worker threads");
  loocv_cmd->add_option("--kl-range", loocv.kl_range,
                        "KL letter range: union or intersection");

  StudyArgs simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Pseudo-document simulation study");
  simulate_cmd->add_option("--db", simulate.db, "Database corpus CSV")
      ->required();
  simulate_cmd->add_option("--alphabets", simulate.alphabets,
                           "Alphabet sidecar file");
  simulate_cmd
      ->add_option("--classifier", simulate.classifiers,
                   "Classifier (repeatable): nb, cs, kl")
      ->required();
  simulate_cmd->add_option("--mu", simulate.mu,
                           "Poisson means (comma separated)")
      ->delimiter(',');
  simulate_cmd->add_option("--reps", simulate.reps, "Replicates per mu");
  simulate_cmd->add_option("--seed", simulate.seed, "Master seed");
  simulate_cmd->add_option("--out-dir", simulate.out_dir, "Output directory")
      ->required();
  simulate_cmd->add_option("--jobs", simulate.jobs, "Worker threads");
  simulate_cmd->add_option("--kl-range", simulate.kl_range,
                           "KL letter range: union or intersection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth);
    if (classify_cmd->parsed()) return cmd_classify(classify);
    if (loocv_cmd->parsed()) return cmd_loocv(loocv);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate);
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
