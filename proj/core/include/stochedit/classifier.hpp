#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochedit/em.hpp"
#include "stochedit/lexicon.hpp"
#include "stochedit/mixture.hpp"
#include "stochedit/transducer.hpp"

namespace stochedit {

// Whether p(x, y | phi) sums over alignments or keeps only the best one.
enum class Interpretation { stochastic, viterbi };

/// Hidden prototype model: p(w, x, y) = p(w | x, L) p(x, y | phi).
struct ClassifierModel {
  MixtureTransducer channel;
  Lexicon lexicon;
  Interpretation interpretation = Interpretation::stochastic;
  bool adapt_word = true;   // re-estimate p(w | L)
  bool adapt_entry = true;  // re-estimate p(x | w, L)
};

// Throws ConfigError for an empty lexicon or alphabet mismatch.
void check_model(const ClassifierModel& m);

// Single-transducer classifier with a uniform word/entry hierarchy.
ClassifierModel make_classifier(Transducer channel, Lexicon lexicon,
                                Interpretation interpretation = Interpretation::stochastic);

/// Utility mu(u | w) of deciding u when the truth is w. Missing pairs are 0.
struct UtilityFunction {
  std::map<std::pair<std::string, std::string>, double> utility;

  double operator()(const std::string& decided, const std::string& truth) const;
  static UtilityFunction identity(const std::vector<std::string>& classes);
};

/// Postulated lexicon labels for one sample; several when maxima tie.
struct Decision {
  std::vector<std::string> labels;
  double score = 0.0;  // max posterior, or min distance for nearest neighbor

  bool empty() const { return labels.empty(); }
};

inline constexpr double kTieTolerance = 1e-9;

// ln p(w, y | phi, L) for every lexicon class, indexed like lexicon.classes().
std::vector<double> class_log_joint(const SymbolString& y, const ClassifierModel& m);
// p(w | y); all zeros when no class can produce y.
std::vector<double> class_posteriors(const SymbolString& y, const ClassifierModel& m);

// Every class attaining the maximal posterior (relative log-domain tolerance).
Decision classify(const SymbolString& y, const ClassifierModel& m, double tie_tolerance = kTieTolerance);
// argmax_u sum_w mu(u | w) p(w | y).
Decision classify(const SymbolString& y, const ClassifierModel& m, const UtilityFunction& mu,
                  double tie_tolerance = kTieTolerance);

/// Accumulators for one pass of mixture EM.
struct MixtureAccumulator {
  EditAccumulator edits;
  std::vector<double> entries;  // gamma(w, x), one per lexicon entry
  std::size_t skipped = 0;

  MixtureAccumulator() = default;
  MixtureAccumulator(const ClassifierModel& m, double transducer_smoothing, double lexicon_smoothing);
  MixtureAccumulator& operator+=(const MixtureAccumulator& other);
};

// Accumulates p(x | w, y) for each prototype of w and a weighted transducer
// expectation step per prototype. Returns ln p(w, y); -inf means skipped.
double mixture_expectation_step(const std::string& w, const SymbolString& y, const ClassifierModel& m,
                                MixtureAccumulator& acc);

// Renormalizes the lexicon (honoring the adapt switches) and re-estimates
// the channel, then applies the tying scheme if one is given.
ClassifierModel mixture_maximization_step(const ClassifierModel& m, const MixtureAccumulator& acc,
                                          const std::optional<TyingScheme>& tying = std::nullopt);

struct ClassifierTrainOptions {
  int max_iterations = 10;
  double threshold = 1e-6;
  double transducer_smoothing = 0.0;
  double lexicon_smoothing = 0.1;
  std::optional<TyingScheme> tying;
  unsigned threads = 1;
};

struct ClassifierTrainResult {
  ClassifierModel model;
  std::vector<double> log_likelihood;  // sum_i ln p(w_i, y_i) per model update
  int iterations = 0;
  bool converged = false;
  std::size_t skipped = 0;
};

// Mixture EM on the joint likelihood. The channel must have one component.
ClassifierTrainResult train_classifier(const ClassifierModel& m, const LabeledCorpus& corpus,
                                       const ClassifierTrainOptions& options);

// One pass over the corpus: fills acc, returns summed ln p(w_i, y_i).
double corpus_mixture_expectation(const ClassifierModel& m, const LabeledCorpus& corpus, unsigned threads,
                                  MixtureAccumulator& acc);

// Distinct <w, y> pairs of the corpus, probabilities proportional to
// frequency plus smoothing. Forms are re-encoded into lexicon_alphabet.
Lexicon build_lexicon_from_corpus(const LabeledCorpus& corpus, const Alphabet& corpus_alphabet,
                                  const Alphabet& lexicon_alphabet, double smoothing = 0.0);
Lexicon build_lexicon_from_corpus(const LabeledCorpus& corpus, const Alphabet& alphabet,
                                  double smoothing = 0.0);

// One-shot addition: the new entry gets p_new and old entries are scaled by
// 1 - p_new. The transducer is unchanged.
ClassifierModel add_word(const ClassifierModel& m, const std::string& w, const SymbolString& x, double p_new);

// 1 - mean over samples of (correct labels / postulated labels).
double word_error_rate(std::span<const Decision> decisions, const LabeledCorpus& test);

std::vector<Decision> classify_corpus(const ClassifierModel& m, const LabeledCorpus& test, unsigned threads = 1);

using StringDistance = std::function<double(const SymbolString& x, const SymbolString& y)>;

StringDistance levenshtein_distance_fn(const Alphabet& source, const Alphabet& target);
StringDistance stochastic_distance_fn(Transducer t);
StringDistance viterbi_distance_fn(Transducer t);
StringDistance mixture_distance_fn(MixtureTransducer m, Interpretation interpretation);

// Every lexicon entry at minimal distance (one label per entry).
Decision nearest_neighbor_classify(const SymbolString& y, const Lexicon& lexicon, const StringDistance& distance,
                                   double tie_tolerance = kTieTolerance);
std::vector<Decision> nearest_neighbor_corpus(const Lexicon& lexicon, const StringDistance& distance,
                                              const LabeledCorpus& test, unsigned threads = 1);

// Every <prototype of w_i, y_i> pair of the corpus, for the ad hoc paradigm.
PairCorpus adhoc_pairs(const LabeledCorpus& corpus, const Lexicon& lexicon);
TrainResult adhoc_train(const Transducer& t, const LabeledCorpus& corpus, const Lexicon& lexicon,
                        const TrainOptions& options);

}  // namespace stochedit
