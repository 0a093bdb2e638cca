#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stochedit/alphabet.hpp"

namespace stochedit {

struct LexiconEntry {
  std::size_t cls = 0;     // index into Lexicon::classes()
  std::size_t form = 0;    // index into Lexicon::forms()
  double log_prob = 0.0;   // ln p(w, x | L)

  double prob() const;
};

/// Weighted set of labeled prototypes <w, x> with probabilities p(w, x | L).
/// Entries are indexed by class L(w) and by form L(x).
class Lexicon {
 public:
  static constexpr double kNormalizationTolerance = 1e-9;

  Lexicon() = default;
  explicit Lexicon(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const Alphabet& alphabet() const { return alphabet_; }

  // Adds weight to <cls, form>, creating the entry if needed. Returns its index.
  // Probabilities are not renormalized; call normalize() afterwards.
  std::size_t add(const std::string& cls, const SymbolString& form, double weight);
  // Throws ConfigError when the total weight is zero.
  void normalize();
  // p(w | L) uniform over classes and p(x | w, L) uniform within each class.
  void set_uniform_hierarchy();
  // Replace every entry probability; sizes must match.
  void set_probabilities(const std::vector<double>& probs);
  void set_log_probabilities(const std::vector<double>& log_probs);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const LexiconEntry& entry(std::size_t i) const { return entries_[i]; }
  const std::vector<LexiconEntry>& entries() const { return entries_; }

  const std::vector<std::string>& classes() const { return classes_; }
  const std::string& class_name(std::size_t cls) const { return classes_[cls]; }
  std::optional<std::size_t> find_class(const std::string& name) const;

  const std::vector<SymbolString>& forms() const { return forms_; }
  const SymbolString& form_of(std::size_t entry) const { return forms_[entries_[entry].form]; }
  std::optional<std::size_t> find_form(const SymbolString& form) const;
  std::optional<std::size_t> find_entry(const std::string& cls, const SymbolString& form) const;

  const std::vector<std::size_t>& entries_of_class(std::size_t cls) const { return by_class_[cls]; }
  const std::vector<std::size_t>& entries_of_form(std::size_t form) const { return by_form_[form]; }

  double total() const;
  // p(w | L)
  double class_prob(std::size_t cls) const;
  // ln p(x | L)
  double form_log_prob(std::size_t form) const;
  // ln p(w | x, L) for the entry's own class and form.
  double log_class_given_form(std::size_t entry) const;

 private:
  Alphabet alphabet_;
  std::vector<LexiconEntry> entries_;
  std::vector<std::string> classes_;
  std::unordered_map<std::string, std::size_t> class_index_;
  std::vector<SymbolString> forms_;
  std::map<SymbolString, std::size_t> form_index_;
  std::vector<std::vector<std::size_t>> by_class_;
  std::vector<std::vector<std::size_t>> by_form_;
};

struct LabeledSample {
  std::string cls;
  SymbolString y;
};

struct LabeledCorpus {
  std::vector<LabeledSample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

}  // namespace stochedit
