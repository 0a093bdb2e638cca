#include "stochedit/mixture.hpp"

#include <cmath>

#include "stochedit/errors.hpp"
#include "stochedit/evaluate.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit {

MixtureTransducer::MixtureTransducer(std::vector<Transducer> components, std::vector<double> weights)
    : components_(std::move(components)) {
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("mixing weights must be nonnegative");
    log_weights_.push_back(safe_log(w));
    weights_.push_back(std::exp(log_weights_.back()));
  }
  check();
}

MixtureTransducer MixtureTransducer::from_log_weights(std::vector<Transducer> components,
                                                      std::vector<double> log_weights) {
  MixtureTransducer m;
  m.components_ = std::move(components);
  for (double lw : log_weights) {
    if (std::isnan(lw)) throw ConfigError("NaN mixing weight");
    m.weights_.push_back(std::exp(lw));
  }
  m.log_weights_ = std::move(log_weights);
  m.check();
  return m;
}

void MixtureTransducer::check() const {
  if (components_.empty()) throw ConfigError("mixture needs at least one component");
  if (weights_.size() != components_.size()) throw ConfigError("one mixing weight per component required");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ConfigError("mixing weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("mixing weights must sum to one");
  for (const auto& c : components_) {
    if (!c.same_alphabets(components_.front())) throw ConfigError("mixture components must share alphabets");
  }
}

MixtureTransducer uniform_mixture(std::vector<Transducer> components) {
  if (components.empty()) throw ConfigError("mixture needs at least one component");
  std::vector<double> weights(components.size(), 1.0 / static_cast<double>(components.size()));
  return MixtureTransducer(std::move(components), std::move(weights));
}

MixtureTransducer tied_untied_mixture(Transducer tied, Transducer untied) {
  std::vector<Transducer> c;
  c.push_back(std::move(tied));
  c.push_back(std::move(untied));
  return uniform_mixture(std::move(c));
}

double log_mixture_probability(const SymbolString& x, const SymbolString& y, const MixtureTransducer& m) {
  double total = kLogZero;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weight(i) == 0.0) continue;
    total = log_add(total, m.log_weight(i) + log_joint_probability(x, y, m.component(i)));
  }
  return total;
}

double mixture_probability(const SymbolString& x, const SymbolString& y, const MixtureTransducer& m) {
  return std::exp(log_mixture_probability(x, y, m));
}

double mixture_stochastic_distance(const SymbolString& x, const SymbolString& y, const MixtureTransducer& m) {
  return nats_to_bits(log_mixture_probability(x, y, m));
}

}  // namespace stochedit
