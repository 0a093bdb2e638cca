#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stochedit/classifier.hpp"
#include "stochedit/lexicon.hpp"

namespace stochedit::cli {

// Where the pronouncing lexicon comes from: a given lexicon file, the
// distinct <w, y> pairs of the training corpus, or of train plus test.
enum class LexiconMode { external, from_train, from_all };
// How the transducers of the model grid are trained.
enum class Paradigm { mixture, adhoc };

std::optional<LexiconMode> parse_lexicon_mode(std::string_view s);
std::string_view to_string(LexiconMode mode);
std::optional<Paradigm> parse_paradigm(std::string_view s);
std::string_view to_string(Paradigm p);

struct ExperimentConfig {
  LexiconMode lexicon_mode = LexiconMode::external;
  Paradigm paradigm = Paradigm::mixture;
  int iterations = 10;
  double threshold = 1e-6;
  double lexicon_smoothing = 0.1;
  bool adapt_word = true;
  bool adapt_entry = true;
  unsigned threads = 1;
};

struct ExperimentRow {
  std::string model;  // "Levenshtein", "Stochastic", "Viterbi"
  std::string tying;  // "-", "tied", "untied", "mixed"
  double error = 0.0;
  double seconds = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t lexicon_entries = 0;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  std::vector<ExperimentRow> rows;

  const ExperimentRow* find(std::string_view model, std::string_view tying) const;
};

// Lexicon selected by the mode; `external` must be set for LexiconMode::external.
Lexicon select_lexicon(LexiconMode mode, const LabeledCorpus& train, const LabeledCorpus& test,
                       const Alphabet& alphabet, const std::optional<Lexicon>& external);

// Levenshtein nearest-neighbor baseline, then the 2 x 3 grid of
// (stochastic | viterbi) x (tied | untied | mixed).
ExperimentReport run_experiment(const LabeledCorpus& train, const LabeledCorpus& test, const Lexicon& lexicon,
                                const ExperimentConfig& config);

// Uniform-weight average of two lexicons with identical entries.
Lexicon average_lexicons(const Lexicon& a, const Lexicon& b);

void print_report(std::ostream& os, const ExperimentReport& report);

}  // namespace stochedit::cli
