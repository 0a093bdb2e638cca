#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "stochedit/alphabet.hpp"
#include "stochedit/em.hpp"
#include "stochedit/lattice.hpp"
#include "stochedit/transducer.hpp"

namespace stochedit {

/// Length-conditioned memoryless transducer: a transition choice omega
/// (deletion, insertion, substitution) times an observation choice within
/// that kind. Has no termination symbol.
class FactoredTransducer {
 public:
  static constexpr double kNormalizationTolerance = 1e-9;

  struct Omega {
    double del = 0.0;
    double ins = 0.0;
    double sub = 0.0;
  };

  FactoredTransducer() = default;
  // Linear probabilities. Throws ConfigError unless omega and each
  // observation distribution sum to one with nonnegative entries.
  FactoredTransducer(Alphabet source, Alphabet target, Omega omega, std::vector<double> del,
                     std::vector<double> ins, std::vector<double> sub);

  // Natural-log parameters; these are the canonical stored values.
  static FactoredTransducer from_log_probabilities(Alphabet source, Alphabet target, Omega log_omega,
                                                   std::vector<double> log_del, std::vector<double> log_ins,
                                                   std::vector<double> log_sub);
  static FactoredTransducer uniform(Alphabet source, Alphabet target);

  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }

  const Omega& omega() const { return omega_; }
  double del(Symbol a) const { return del_[a]; }
  double ins(Symbol b) const { return ins_[b]; }
  double sub(Symbol a, Symbol b) const { return sub_[a * target_.size() + b]; }
  const std::vector<double>& del_probs() const { return del_; }
  const std::vector<double>& ins_probs() const { return ins_; }
  // Row-major over source x target.
  const std::vector<double>& sub_probs() const { return sub_; }
  const std::vector<double>& log_del_probs() const { return log_del_; }
  const std::vector<double>& log_ins_probs() const { return log_ins_; }
  const std::vector<double>& log_sub_probs() const { return log_sub_; }

  // Natural-log views used by the dynamic programs.
  double log_omega_del() const { return log_omega_[0]; }
  double log_omega_ins() const { return log_omega_[1]; }
  double log_omega_sub() const { return log_omega_[2]; }
  double log_del(Symbol a) const { return log_del_[a]; }
  double log_ins(Symbol b) const { return log_ins_[b]; }
  double log_sub(Symbol a, Symbol b) const { return log_sub_[a * target_.size() + b]; }

 private:
  void finish();  // derives linear values from the logs and validates

  Alphabet source_;
  Alphabet target_;
  Omega omega_;
  std::vector<double> del_, ins_, sub_;
  double log_omega_[3] = {0.0, 0.0, 0.0};
  std::vector<double> log_del_, log_ins_, log_sub_;
};

// Translation from the unfactored parameterization, renormalized over E.
// Throws ConfigError when any of the three edit kinds has zero total.
FactoredTransducer factor(const Transducer& t);
// delta(a,eps) = omega_d delta_d(a), ... with no termination mass.
Transducer unfactor(const FactoredTransducer& f);

/// Explicit joint distribution over string lengths (T, V).
class LengthPrior {
 public:
  LengthPrior() = default;
  // Throws ConfigError unless entries are nonnegative and sum to one.
  explicit LengthPrior(std::map<std::pair<std::size_t, std::size_t>, double> table);
  // Relative frequencies of (|x|, |y|) in a corpus.
  static LengthPrior from_corpus(const PairCorpus& corpus);

  double operator()(std::size_t T, std::size_t V) const;
  const std::map<std::pair<std::size_t, std::size_t>, double>& table() const { return table_; }

 private:
  std::map<std::pair<std::size_t, std::size_t>, double> table_;
};

// A string pair with exactly the requested lengths.
std::pair<SymbolString, SymbolString> generate_strings(std::size_t T, std::size_t V, const FactoredTransducer& f,
                                                       Rng& rng);
std::pair<SymbolString, SymbolString> generate_strings(std::size_t T, std::size_t V, const FactoredTransducer& f,
                                                       std::uint64_t seed);

// alpha(t, v) = ln p(x^t, y^v, <t,v> | theta, T, V).
LogMatrix forward_evaluate_strings(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f);
// beta(t, v) = ln p(suffixes | theta, T, V, <t,v>); beta(T, V) = 0.
LogMatrix backward_evaluate_strings(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f);

// p(x, y | theta, |x|, |y|)
double conditional_log_probability(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f);
double conditional_probability(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f);
// p(x, y | theta, T, V) p(T, V)
double joint_with_length_prior(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f,
                               const LengthPrior& prior);

struct ConditionalDistances {
  double viterbi_bits = kInfinity;
  double stochastic_bits = kInfinity;
};
ConditionalDistances conditional_distances(const SymbolString& x, const SymbolString& y,
                                           const FactoredTransducer& f);

/// Transition (chi) and observation (gamma) expectations.
struct FactoredAccumulator {
  double chi_del = 0.0;
  double chi_ins = 0.0;
  double chi_sub = 0.0;
  std::vector<double> gamma_del;
  std::vector<double> gamma_ins;
  std::vector<double> gamma_sub;
  std::size_t skipped = 0;

  FactoredAccumulator() = default;
  FactoredAccumulator(std::size_t size_a, std::size_t size_b, double smoothing = 0.0);
  FactoredAccumulator& operator+=(const FactoredAccumulator& other);
};

// Posterior counts; only unforced transitions (both strings incomplete at
// the source state) feed chi. Returns ln p(x, y | theta, T, V).
double expectation_step_strings(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f,
                                FactoredAccumulator& acc, double lambda = 1.0);

// Renormalizes omega and each observation distribution independently; a
// block with zero total is left unchanged. Throws TrainingError if every
// accumulator is zero.
FactoredTransducer maximization_step_strings(const FactoredTransducer& f, const FactoredAccumulator& acc);

struct FactoredTrainResult {
  FactoredTransducer model;
  std::vector<double> log_likelihood;
  int iterations = 0;
  bool converged = false;
  std::size_t skipped = 0;
};

FactoredTrainResult train_strings(const FactoredTransducer& initial, const PairCorpus& corpus,
                                  const TrainOptions& options);

}  // namespace stochedit
