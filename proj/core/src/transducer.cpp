#include "stochedit/transducer.hpp"

#include <cmath>
#include <sstream>

#include "stochedit/errors.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit {

std::string ValidityReport::describe() const {
  std::ostringstream os;
  os << "total=" << total << " termination=" << termination;
  if (!entries_in_range) os << " [entries outside [0,1]]";
  if (!sums_to_one) os << " [does not sum to one]";
  if (valid_distribution() && !(termination > 0.0)) os << " [no termination mass: not a string-pair model]";
  return os.str();
}

ValidityReport validate(const EditSpace& space, std::span<const double> probabilities) {
  ValidityReport r;
  if (probabilities.size() != space.size()) {
    r.entries_in_range = false;
    r.sums_to_one = false;
    return r;
  }
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) r.entries_in_range = false;
    r.total += p;
  }
  r.termination = probabilities[space.end_index()];
  r.sums_to_one = std::abs(r.total - 1.0) <= Transducer::kNormalizationTolerance;
  return r;
}

ValidityReport validate(const Transducer& t) {
  const auto probs = t.probabilities();
  return validate(t.space(), probs);
}

Transducer::Transducer(Alphabet source, Alphabet target, std::vector<double> log_probs)
    : source_(std::move(source)),
      target_(std::move(target)),
      space_(source_.size(), target_.size()),
      log_probs_(std::move(log_probs)) {}

Transducer Transducer::uniform(Alphabet source, Alphabet target) {
  if (source.empty() || target.empty()) throw ConfigError("transducer alphabets must be non-empty");
  const EditSpace space(source.size(), target.size());
  std::vector<double> logs(space.size(), -std::log(static_cast<double>(space.size())));
  return Transducer(std::move(source), std::move(target), std::move(logs));
}

Transducer Transducer::from_probabilities(Alphabet source, Alphabet target, std::span<const double> probabilities) {
  if (source.empty() || target.empty()) throw ConfigError("transducer alphabets must be non-empty");
  const EditSpace space(source.size(), target.size());
  const ValidityReport r = validate(space, probabilities);
  if (probabilities.size() != space.size()) throw ConfigError("probability table has the wrong size");
  if (!r.valid_distribution()) throw ConfigError("invalid edit distribution: " + r.describe());
  std::vector<double> logs(probabilities.size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = safe_log(probabilities[i]);
  return Transducer(std::move(source), std::move(target), std::move(logs));
}

Transducer Transducer::from_log_probabilities(Alphabet source, Alphabet target, std::vector<double> log_probabilities) {
  if (source.empty() || target.empty()) throw ConfigError("transducer alphabets must be non-empty");
  const EditSpace space(source.size(), target.size());
  if (log_probabilities.size() != space.size()) throw ConfigError("probability table has the wrong size");
  std::vector<double> probs(log_probabilities.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (std::isnan(log_probabilities[i])) throw ConfigError("NaN log-probability");
    probs[i] = std::exp(log_probabilities[i]);
  }
  const ValidityReport r = validate(space, probs);
  if (!r.valid_distribution()) throw ConfigError("invalid edit distribution: " + r.describe());
  return Transducer(std::move(source), std::move(target), std::move(log_probabilities));
}

double Transducer::prob(const EditOp& op) const { return std::exp(log_prob(op)); }

double Transducer::end_prob() const { return std::exp(log_end()); }

std::vector<double> Transducer::probabilities() const {
  std::vector<double> out(log_probs_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_probs_[i]);
  return out;
}

Transducer random_transducer(const Alphabet& source, const Alphabet& target, Rng& rng) {
  const EditSpace space(source.size(), target.size());
  std::vector<double> w(space.size());
  double total = 0.0;
  for (double& x : w) {
    // Exponential(1) draws normalize to a Dirichlet(1, ..., 1) sample.
    double u = uniform01(rng);
    x = -std::log1p(-u) + 1e-12;
    total += x;
  }
  for (double& x : w) x /= total;
  return Transducer::from_probabilities(source, target, w);
}

}  // namespace stochedit
