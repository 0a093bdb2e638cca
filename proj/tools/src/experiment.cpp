#include "stochedit/cli/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "stochedit/errors.hpp"
#include "stochedit/logmath.hpp"
#include "stochedit/mixture.hpp"

namespace stochedit::cli {

std::optional<LexiconMode> parse_lexicon_mode(std::string_view s) {
  if (s == "external") return LexiconMode::external;
  if (s == "from-train") return LexiconMode::from_train;
  if (s == "from-all") return LexiconMode::from_all;
  return std::nullopt;
}

std::string_view to_string(LexiconMode mode) {
  switch (mode) {
    case LexiconMode::external: return "external";
    case LexiconMode::from_train: return "from-train";
    case LexiconMode::from_all: return "from-all";
  }
  return "unknown";
}

std::optional<Paradigm> parse_paradigm(std::string_view s) {
  if (s == "mixture") return Paradigm::mixture;
  if (s == "adhoc") return Paradigm::adhoc;
  return std::nullopt;
}

std::string_view to_string(Paradigm p) { return p == Paradigm::mixture ? "mixture" : "adhoc"; }

const ExperimentRow* ExperimentReport::find(std::string_view model, std::string_view tying) const {
  for (const auto& r : rows) {
    if (r.model == model && r.tying == tying) return &r;
  }
  return nullptr;
}

Lexicon select_lexicon(LexiconMode mode, const LabeledCorpus& train, const LabeledCorpus& test,
                       const Alphabet& alphabet, const std::optional<Lexicon>& external) {
  switch (mode) {
    case LexiconMode::external:
      if (!external) throw ConfigError("lexicon mode 'external' needs a lexicon file");
      return *external;
    case LexiconMode::from_train:
      return build_lexicon_from_corpus(train, alphabet);
    case LexiconMode::from_all: {
      LabeledCorpus all = train;
      all.samples.insert(all.samples.end(), test.samples.begin(), test.samples.end());
      return build_lexicon_from_corpus(all, alphabet);
    }
  }
  throw ConfigError("unknown lexicon mode");
}

Lexicon average_lexicons(const Lexicon& a, const Lexicon& b) {
  if (a.size() != b.size()) throw ConfigError("cannot average lexicons with different entries");
  std::vector<double> logs(a.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    if (a.entry(e).cls != b.entry(e).cls || a.entry(e).form != b.entry(e).form)
      throw ConfigError("cannot average lexicons with different entries");
    logs[e] = log_add(a.entry(e).log_prob, b.entry(e).log_prob) - std::log(2.0);
  }
  Lexicon out = a;
  out.set_log_probabilities(logs);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const char* interpretation_name(Interpretation i) { return i == Interpretation::stochastic ? "Stochastic" : "Viterbi"; }

void run_mixture_grid(const LabeledCorpus& train, const LabeledCorpus& test, const Lexicon& lexicon,
                      const ExperimentConfig& config, ExperimentReport& report) {
  const Alphabet& alphabet = lexicon.alphabet();
  for (Interpretation interp : {Interpretation::stochastic, Interpretation::viterbi}) {
    ClassifierModel init = make_classifier(Transducer::uniform(alphabet, alphabet), lexicon, interp);
    init.adapt_word = config.adapt_word;
    init.adapt_entry = config.adapt_entry;

    ClassifierTrainOptions opts;
    opts.max_iterations = config.iterations;
    opts.threshold = config.threshold;
    opts.lexicon_smoothing = config.lexicon_smoothing;
    opts.threads = config.threads;

    auto start = Clock::now();
    opts.tying = TyingScheme::four_class(alphabet, alphabet);
    const ClassifierModel tied = train_classifier(init, train, opts).model;
    const double tied_train = seconds_since(start);
    start = Clock::now();
    const auto tied_decisions = classify_corpus(tied, test, config.threads);
    report.rows.push_back({interpretation_name(interp), "tied", word_error_rate(tied_decisions, test),
                           tied_train + seconds_since(start)});

    start = Clock::now();
    opts.tying.reset();
    const ClassifierModel untied = train_classifier(init, train, opts).model;
    const double untied_train = seconds_since(start);
    start = Clock::now();
    const auto untied_decisions = classify_corpus(untied, test, config.threads);
    report.rows.push_back({interpretation_name(interp), "untied", word_error_rate(untied_decisions, test),
                           untied_train + seconds_since(start)});

    start = Clock::now();
    ClassifierModel mixed = untied;
    mixed.channel = tied_untied_mixture(tied.channel.component(0), untied.channel.component(0));
    mixed.lexicon = average_lexicons(tied.lexicon, untied.lexicon);
    const auto mixed_decisions = classify_corpus(mixed, test, config.threads);
    report.rows.push_back({interpretation_name(interp), "mixed", word_error_rate(mixed_decisions, test),
                           seconds_since(start)});
  }
}

void run_adhoc_grid(const LabeledCorpus& train, const LabeledCorpus& test, const Lexicon& lexicon,
                    const ExperimentConfig& config, ExperimentReport& report) {
  const Alphabet& alphabet = lexicon.alphabet();
  const PairCorpus pairs = adhoc_pairs(train, lexicon);
  if (pairs.empty()) throw TrainingError("no training sample has a lexicon entry");
  for (Interpretation interp : {Interpretation::stochastic, Interpretation::viterbi}) {
    TrainOptions opts;
    opts.max_iterations = config.iterations;
    opts.threshold = config.threshold;
    opts.threads = config.threads;
    opts.mode = interp == Interpretation::stochastic ? ExpectationMode::full : ExpectationMode::viterbi;
    auto distance_of = [&](const Transducer& t) {
      return interp == Interpretation::stochastic ? stochastic_distance_fn(t) : viterbi_distance_fn(t);
    };

    auto start = Clock::now();
    opts.tying = TyingScheme::four_class(alphabet, alphabet);
    const Transducer tied = stochedit::train(Transducer::uniform(alphabet, alphabet), pairs, opts).model;
    const auto tied_decisions = nearest_neighbor_corpus(lexicon, distance_of(tied), test, config.threads);
    report.rows.push_back({interpretation_name(interp), "tied", word_error_rate(tied_decisions, test),
                           seconds_since(start)});

    start = Clock::now();
    opts.tying.reset();
    const Transducer untied = stochedit::train(Transducer::uniform(alphabet, alphabet), pairs, opts).model;
    const auto untied_decisions = nearest_neighbor_corpus(lexicon, distance_of(untied), test, config.threads);
    report.rows.push_back({interpretation_name(interp), "untied", word_error_rate(untied_decisions, test),
                           seconds_since(start)});

    start = Clock::now();
    const auto mixed_decisions =
        nearest_neighbor_corpus(lexicon, mixture_distance_fn(tied_untied_mixture(tied, untied), interp), test,
                                config.threads);
    report.rows.push_back({interpretation_name(interp), "mixed", word_error_rate(mixed_decisions, test),
                           seconds_since(start)});
  }
}

}  // namespace

ExperimentReport run_experiment(const LabeledCorpus& train, const LabeledCorpus& test, const Lexicon& lexicon,
                                const ExperimentConfig& config) {
  if (train.empty() || test.empty()) throw ConfigError("experiment needs non-empty train and test corpora");
  if (lexicon.empty()) throw ConfigError("experiment lexicon is empty");
  ExperimentReport report;
  report.config = config;
  report.lexicon_entries = lexicon.size();
  report.train_samples = train.size();
  report.test_samples = test.size();

  const auto start = Clock::now();
  const auto baseline = nearest_neighbor_corpus(
      lexicon, levenshtein_distance_fn(lexicon.alphabet(), lexicon.alphabet()), test, config.threads);
  report.rows.push_back({"Levenshtein", "-", word_error_rate(baseline, test), seconds_since(start)});

  if (config.paradigm == Paradigm::mixture) {
    run_mixture_grid(train, test, lexicon, config, report);
  } else {
    run_adhoc_grid(train, test, lexicon, config, report);
  }
  return report;
}

void print_report(std::ostream& os, const ExperimentReport& r) {
  char line[128];
  os << "lexicon " << to_string(r.config.lexicon_mode) << " (" << r.lexicon_entries << " entries), paradigm "
     << to_string(r.config.paradigm) << ", " << r.train_samples << " train / " << r.test_samples << " test, "
     << r.config.iterations << " iterations\n";
  std::snprintf(line, sizeof line, "%-12s %-7s %8s %9s\n", "model", "tying", "error%", "seconds");
  os << line;
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line, "%-12s %-7s %8.2f %9.2f\n", row.model.c_str(), row.tying.c_str(),
                  100.0 * row.error, row.seconds);
    os << line;
  }
}

}  // namespace stochedit::cli
