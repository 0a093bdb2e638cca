#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "stochedit/alphabet.hpp"
#include "stochedit/edit_op.hpp"

namespace stochedit {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from raw engine bits so that sampling is
// reproducible across standard library implementations.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Result of checking a probability table over E plus termination.
struct ValidityReport {
  bool entries_in_range = true;  // every value in [0, 1]
  bool sums_to_one = true;       // within 1e-9
  double total = 0.0;
  double termination = 0.0;

  // A proper distribution over edit operations.
  bool valid_distribution() const { return entries_in_range && sums_to_one; }
  // Induces a proper distribution over string pairs (needs termination mass).
  bool valid_string_pair_model() const { return valid_distribution() && termination > 0.0; }
  std::string describe() const;
};

ValidityReport validate(const EditSpace& space, std::span<const double> probabilities);

/// Memoryless stochastic transducer: one distribution over E plus
/// termination. Stored as natural-log probabilities; immutable once built.
class Transducer {
 public:
  static constexpr double kNormalizationTolerance = 1e-9;

  Transducer() = default;

  // Throws ConfigError if either alphabet is empty.
  static Transducer uniform(Alphabet source, Alphabet target);
  // Throws ConfigError unless the table is a valid distribution.
  static Transducer from_probabilities(Alphabet source, Alphabet target, std::span<const double> probabilities);
  static Transducer from_log_probabilities(Alphabet source, Alphabet target, std::vector<double> log_probabilities);

  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }
  const EditSpace& space() const { return space_; }

  double log_prob(const EditOp& op) const { return log_probs_[space_.index(op)]; }
  double prob(const EditOp& op) const;

  double log_sub(Symbol a, Symbol b) const { return log_probs_[space_.sub_index(a, b)]; }
  double log_del(Symbol a) const { return log_probs_[space_.del_index(a)]; }
  double log_ins(Symbol b) const { return log_probs_[space_.ins_index(b)]; }
  double log_end() const { return log_probs_[space_.end_index()]; }
  double end_prob() const;

  std::span<const double> log_probabilities() const { return log_probs_; }
  std::vector<double> probabilities() const;

  bool same_alphabets(const Transducer& other) const {
    return source_ == other.source_ && target_ == other.target_;
  }

 private:
  Transducer(Alphabet source, Alphabet target, std::vector<double> log_probs);

  Alphabet source_;
  Alphabet target_;
  EditSpace space_;
  std::vector<double> log_probs_;
};

ValidityReport validate(const Transducer& t);

// Strictly positive Dirichlet(1, ..., 1) draw over E plus termination.
Transducer random_transducer(const Alphabet& source, const Alphabet& target, Rng& rng);

}  // namespace stochedit
