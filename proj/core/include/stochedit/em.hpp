#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "stochedit/alphabet.hpp"
#include "stochedit/edit_op.hpp"
#include "stochedit/lattice.hpp"
#include "stochedit/transducer.hpp"

namespace stochedit {

struct PairCorpus {
  std::vector<std::pair<SymbolString, SymbolString>> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

/// Expected edit-operation counts (gamma), indexed like the transducer table.
struct EditAccumulator {
  std::vector<double> gamma;
  std::size_t skipped = 0;  // zero-probability pairs

  EditAccumulator() = default;
  explicit EditAccumulator(const EditSpace& space, double smoothing = 0.0)
      : gamma(space.size(), smoothing) {}

  double total() const;
  EditAccumulator& operator+=(const EditAccumulator& other);
};

enum class ExpectationMode { full, viterbi };

/// Partition of E into equivalence classes whose members share one
/// probability. Termination is never tied.
class TyingScheme {
 public:
  TyingScheme() = default;
  // class_of has one entry per edit in E. Throws ConfigError on size mismatch.
  TyingScheme(const EditSpace& space, std::vector<std::size_t> class_of);
  // Throws ConfigError unless every edit in E is assigned exactly once.
  static TyingScheme from_assignments(const EditSpace& space,
                                      const std::vector<std::pair<EditOp, std::size_t>>& assignments);
  // Identity substitution / other substitution / insertion / deletion.
  static TyingScheme four_class(const Alphabet& source, const Alphabet& target);
  static TyingScheme singletons(const EditSpace& space);

  const EditSpace& space() const { return space_; }
  std::size_t num_classes() const { return sizes_.size(); }
  std::size_t class_of(std::size_t edit_index) const { return class_of_[edit_index]; }
  std::size_t class_size(std::size_t cls) const { return sizes_[cls]; }

 private:
  EditSpace space_;
  std::vector<std::size_t> class_of_;
  std::vector<std::size_t> sizes_;
};

struct TrainOptions {
  int max_iterations = 10;
  double threshold = 1e-6;  // relative change in corpus log-likelihood
  double smoothing = 0.0;   // added to every gamma at initialization
  ExpectationMode mode = ExpectationMode::full;
  std::optional<TyingScheme> tying;
  unsigned threads = 1;
};

// Adds lambda-weighted posterior edit counts for (x, y). Returns ln p(x, y);
// a zero-probability pair leaves gamma untouched and bumps acc.skipped.
double expectation_step(const SymbolString& x, const SymbolString& y, const Transducer& t,
                        EditAccumulator& acc, double lambda = 1.0);

// Same contract, using lattices the caller already computed.
double expectation_step(const SymbolString& x, const SymbolString& y, const Transducer& t,
                        const LogMatrix& alpha, const LogMatrix& beta, EditAccumulator& acc,
                        double lambda);

// Adds lambda times the operation counts of the single best alignment.
// Returns the ln probability of that alignment.
double viterbi_expectation_step(const SymbolString& x, const SymbolString& y, const Transducer& t,
                                EditAccumulator& acc, double lambda = 1.0);

// delta(z) := gamma(z) / N. Throws TrainingError when N = 0.
Transducer maximization_step(const Transducer& t, const EditAccumulator& acc);

// delta(z) := delta(tau(z)) / |tau(z)| for each class.
Transducer apply_tying(const Transducer& t, const TyingScheme& scheme);

struct TrainResult {
  Transducer model;
  // Corpus log-likelihood (nats) of the model after 0, 1, ... updates.
  std::vector<double> log_likelihood;
  int iterations = 0;
  bool converged = false;
  std::size_t skipped = 0;  // zero-probability pairs in the last E-step
};

// Expectation maximization over a pair corpus. Throws TrainingError if the
// corpus is empty or every pair has zero probability.
TrainResult train(const Transducer& initial, const PairCorpus& corpus, const TrainOptions& options);

// One E-step over a corpus. Fills acc and returns the summed ln p of the
// processed pairs (the Viterbi objective in viterbi mode).
double corpus_expectation(const Transducer& t, const PairCorpus& corpus, ExpectationMode mode,
                          unsigned threads, EditAccumulator& acc);

}  // namespace stochedit
