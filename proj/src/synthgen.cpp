#include "isoscribe/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isoscribe/numerics.hpp"

namespace isoscribe {

namespace {

// Table of letter frequencies in the exemplar paragraph: 42 uppercase, 477
// lowercase, 14 digits, 533 characters total.
const std::vector<std::pair<std::string, int>> kLondonLetterFrequencies = {
    {"A", 1}, {"B", 2}, {"C", 2}, {"D", 3}, {"E", 3}, {"F", 1}, {"G", 1},
    {"H", 1}, {"I", 3}, {"J", 1}, {"K", 1}, {"L", 4}, {"M", 3}, {"N", 1},
    {"O", 1}, {"P", 1}, {"Q", 1}, {"R", 2}, {"S", 2}, {"T", 2}, {"U", 1},
    {"V", 1}, {"W", 1}, {"X", 1}, {"Y", 1}, {"Z", 1},
    {"a", 35}, {"b", 7},  {"c", 15}, {"d", 31}, {"e", 65}, {"f", 6},
    {"g", 10}, {"h", 23}, {"i", 28}, {"j", 2},  {"k", 2},  {"l", 22},
    {"m", 7},  {"n", 37}, {"o", 35}, {"p", 5},  {"q", 3},  {"r", 34},
    {"s", 29}, {"t", 40}, {"u", 17}, {"v", 4},  {"w", 9},  {"x", 3},
    {"y", 6},  {"z", 2},
    {"0", 1}, {"1", 1}, {"2", 2}, {"3", 1}, {"4", 2}, {"5", 1}, {"6", 2},
    {"7", 1}, {"8", 2}, {"9", 1},
};

double sample_normal(RngStream& stream) {
  const double u1 = stream.next_open_double();
  const double u2 = stream.next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Marsaglia-Tsang, with the boost trick for shape < 1.
double sample_gamma(RngStream& stream, double shape) {
  if (shape < 1.0) {
    const double u = stream.next_open_double();
    return sample_gamma(stream, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_normal(stream);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.next_open_double();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::string padded_id(const char* prefix, int value, int max_value) {
  int width = 1;
  for (int v = max_value; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(value);
  return std::string(prefix) +
         std::string(static_cast<std::size_t>(width) - digits.size(), '0') +
         digits;
}

}  // namespace

int LetterTemplate::total() const {
  int sum = 0;
  for (const auto& [letter, freq] : frequencies) sum += freq;
  return sum;
}

const LetterTemplate& london_letter_template() {
  static const LetterTemplate tmpl{kLondonLetterFrequencies};
  return tmpl;
}

LetterTemplate load_letter_template(std::istream& in) {
  LetterTemplate tmpl;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty template file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "letter,frequency")
    throw ParseError("bad header, expected 'letter,frequency'", line_no);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("expected 'letter,frequency'", line_no);
    const std::string letter = line.substr(0, comma);
    const int freq = std::stoi(line.substr(comma + 1));
    if (letter.empty() || freq < 1)
      throw ParseError("bad template row", line_no);
    tmpl.frequencies.emplace_back(letter, freq);
  }
  return tmpl;
}

std::vector<double> sample_dirichlet(RngStream& stream, double alpha,
                                     std::size_t M) {
  if (!(alpha > 0.0))
    throw std::domain_error("sample_dirichlet: alpha must be positive");
  if (M < 2) throw std::domain_error("sample_dirichlet: need M >= 2");
  std::vector<double> draws(M);
  double total = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    draws[m] = sample_gamma(stream, alpha);
    total += draws[m];
  }
  if (total <= 0.0) {
    // All gammas underflowed (tiny alpha); fall back to a single category.
    const std::size_t pick = static_cast<std::size_t>(
        stream.next_double() * static_cast<double>(M));
    std::fill(draws.begin(), draws.end(), 1e-300);
    draws[std::min(pick, M - 1)] = 1.0;
    total = 1.0 + static_cast<double>(M) * 1e-300;
  }
  for (double& d : draws) d /= total;
  return draws;
}

Corpus generate_corpus(const SynthConfig& config,
                       const LetterTemplate& letter_template) {
  if (config.writers < 1 || config.docs_per_writer < 1 || config.isocodes < 2)
    throw std::invalid_argument("generate_corpus: bad config");
  if (!(config.completeness > 0.0) || config.completeness > 1.0)
    throw std::invalid_argument("generate_corpus: completeness must be in (0, 1]");

  Alphabets alphabets;
  for (const auto& [letter, freq] : letter_template.frequencies)
    alphabets.letters.push_back(letter);
  std::sort(alphabets.letters.begin(), alphabets.letters.end());
  for (int m = 1; m <= config.isocodes; ++m)
    alphabets.isocodes.push_back(padded_id("i", m, config.isocodes));
  alphabets.rebuild_index();

  // Template counts in alphabet order, scaled by completeness.
  std::vector<std::int64_t> scaled(alphabets.L(), 0);
  for (const auto& [letter, freq] : letter_template.frequencies) {
    const int l = alphabets.letter_index(letter);
    if (l < 0) continue;
    scaled[static_cast<std::size_t>(l)] =
        std::llround(config.completeness * static_cast<double>(freq));
  }

  const std::size_t M = static_cast<std::size_t>(config.isocodes);
  std::vector<Document> documents;
  for (int w = 1; w <= config.writers; ++w) {
    const std::string writer_id = padded_id("w", w, config.writers);

    // One style per (writer, letter), independent of completeness and of the
    // number of documents requested.
    std::vector<std::vector<double>> styles(alphabets.L());
    for (std::size_t l = 0; l < alphabets.L(); ++l) {
      RngStream stream(config.master_seed,
                       "style/" + writer_id + "/" + alphabets.letters[l]);
      styles[l] = sample_dirichlet(stream, config.alpha, M);
    }

    for (int d = 1; d <= config.docs_per_writer; ++d) {
      Document doc;
      doc.writer_id = writer_id;
      doc.doc_id = padded_id("d", d, config.docs_per_writer);
      for (std::size_t l = 0; l < alphabets.L(); ++l) {
        if (scaled[l] == 0) continue;
        RngStream stream(config.master_seed, "doc/" + writer_id + "/" +
                                                 doc.doc_id + "/" +
                                                 alphabets.letters[l]);
        const auto counts = sample_multinomial(stream, scaled[l], styles[l]);
        for (std::size_t m = 0; m < M; ++m) {
          if (counts[m] > 0)
            doc.cells.push_back(
                {static_cast<int>(l), static_cast<int>(m), counts[m]});
        }
      }
      documents.push_back(std::move(doc));
    }
  }
  return Corpus::build(std::move(alphabets), std::move(documents));
}

}  // namespace isoscribe
