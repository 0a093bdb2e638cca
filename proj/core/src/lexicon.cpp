#include "stochedit/lexicon.hpp"

#include <cmath>

#include "stochedit/errors.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit {

double LexiconEntry::prob() const { return std::exp(log_prob); }

std::size_t Lexicon::add(const std::string& cls, const SymbolString& form, double weight) {
  if (!(weight >= 0.0)) throw ConfigError("lexicon weights must be nonnegative");
  alphabet_.check(form, "lexicon form");
  if (cls.empty()) throw ConfigError("lexicon class names must be non-empty");

  std::size_t c;
  if (auto it = class_index_.find(cls); it != class_index_.end()) {
    c = it->second;
  } else {
    c = classes_.size();
    classes_.push_back(cls);
    class_index_.emplace(cls, c);
    by_class_.emplace_back();
  }
  std::size_t f;
  if (auto it = form_index_.find(form); it != form_index_.end()) {
    f = it->second;
  } else {
    f = forms_.size();
    forms_.push_back(form);
    form_index_.emplace(form, f);
    by_form_.emplace_back();
  }
  for (std::size_t e : by_class_[c]) {
    if (entries_[e].form == f) {
      entries_[e].log_prob = log_add(entries_[e].log_prob, safe_log(weight));
      return e;
    }
  }
  const std::size_t e = entries_.size();
  entries_.push_back({c, f, safe_log(weight)});
  by_class_[c].push_back(e);
  by_form_[f].push_back(e);
  return e;
}

double Lexicon::total() const {
  double t = 0.0;
  for (const auto& e : entries_) t += e.prob();
  return t;
}

void Lexicon::normalize() {
  double log_total = kLogZero;
  for (const auto& e : entries_) log_total = log_add(log_total, e.log_prob);
  if (log_total == kLogZero) throw ConfigError("lexicon has zero total weight");
  for (auto& e : entries_) e.log_prob -= log_total;
}

void Lexicon::set_uniform_hierarchy() {
  if (classes_.empty()) throw ConfigError("empty lexicon");
  const double log_word = -std::log(static_cast<double>(classes_.size()));
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    const double log_entry = -std::log(static_cast<double>(by_class_[c].size()));
    for (std::size_t e : by_class_[c]) entries_[e].log_prob = log_word + log_entry;
  }
}

void Lexicon::set_probabilities(const std::vector<double>& probs) {
  if (probs.size() != entries_.size()) throw ConfigError("lexicon probability count mismatch");
  std::vector<double> logs(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw ConfigError("lexicon probabilities must be nonnegative");
    logs[i] = safe_log(probs[i]);
  }
  set_log_probabilities(logs);
}

void Lexicon::set_log_probabilities(const std::vector<double>& log_probs) {
  if (log_probs.size() != entries_.size()) throw ConfigError("lexicon probability count mismatch");
  double total = 0.0;
  for (double lp : log_probs) {
    if (std::isnan(lp) || lp > 0.0) throw ConfigError("lexicon log-probabilities must be <= 0");
    total += std::exp(lp);
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) throw ConfigError("lexicon probabilities must sum to one");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i].log_prob = log_probs[i];
}

std::optional<std::size_t> Lexicon::find_class(const std::string& name) const {
  auto it = class_index_.find(name);
  if (it == class_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Lexicon::find_form(const SymbolString& form) const {
  auto it = form_index_.find(form);
  if (it == form_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Lexicon::find_entry(const std::string& cls, const SymbolString& form) const {
  const auto c = find_class(cls);
  const auto f = find_form(form);
  if (!c || !f) return std::nullopt;
  for (std::size_t e : by_class_[*c]) {
    if (entries_[e].form == *f) return e;
  }
  return std::nullopt;
}

double Lexicon::class_prob(std::size_t cls) const {
  double p = 0.0;
  for (std::size_t e : by_class_[cls]) p += entries_[e].prob();
  return p;
}

double Lexicon::form_log_prob(std::size_t form) const {
  double lp = kLogZero;
  for (std::size_t e : by_form_[form]) lp = log_add(lp, entries_[e].log_prob);
  return lp;
}

double Lexicon::log_class_given_form(std::size_t entry) const {
  const double denom = form_log_prob(entries_[entry].form);
  if (denom == kLogZero) return kLogZero;
  return entries_[entry].log_prob - denom;
}

}  // namespace stochedit
