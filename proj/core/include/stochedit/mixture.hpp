#pragma once

#include <vector>

#include "stochedit/alphabet.hpp"
#include "stochedit/transducer.hpp"

namespace stochedit {

/// Convex combination of memoryless transducers over shared alphabets.
class MixtureTransducer {
 public:
  MixtureTransducer() = default;
  // Throws ConfigError for k = 0, mismatched alphabets, or weights that are
  // negative or do not sum to one.
  MixtureTransducer(std::vector<Transducer> components, std::vector<double> weights);
  // ln mixing weights are the canonical stored values.
  static MixtureTransducer from_log_weights(std::vector<Transducer> components, std::vector<double> log_weights);

  std::size_t size() const { return components_.size(); }
  const Transducer& component(std::size_t i) const { return components_[i]; }
  const std::vector<Transducer>& components() const { return components_; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double log_weight(std::size_t i) const { return log_weights_[i]; }
  const std::vector<double>& log_weights() const { return log_weights_; }

  const Alphabet& source() const { return components_.front().source(); }
  const Alphabet& target() const { return components_.front().target(); }

 private:
  void check() const;

  std::vector<Transducer> components_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
};

MixtureTransducer uniform_mixture(std::vector<Transducer> components);

// Uniform mixture of a tied and an untied model of the same corpus.
MixtureTransducer tied_untied_mixture(Transducer tied, Transducer untied);

double log_mixture_probability(const SymbolString& x, const SymbolString& y, const MixtureTransducer& m);
double mixture_probability(const SymbolString& x, const SymbolString& y, const MixtureTransducer& m);
// -log2 of the mixture probability, in bits.
double mixture_stochastic_distance(const SymbolString& x, const SymbolString& y, const MixtureTransducer& m);

}  // namespace stochedit
