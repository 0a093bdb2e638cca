#pragma once

#include <span>
#include <vector>

#include "stochedit/alphabet.hpp"
#include "stochedit/edit_op.hpp"
#include "stochedit/transducer.hpp"

namespace stochedit {

/// Nonnegative cost for every edit operation in E (termination excluded).
class CostFunction {
 public:
  CostFunction() = default;
  CostFunction(Alphabet source, Alphabet target, std::vector<double> costs);

  // Identity substitutions (same token in both alphabets) cost 0, all else 1.
  static CostFunction levenshtein(Alphabet source, Alphabet target);
  // c(z) = -log2 p(z); zero-probability operations get infinite cost.
  static CostFunction from_transducer(const Transducer& t);

  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }
  const EditSpace& space() const { return space_; }

  double cost(const EditOp& op) const { return costs_[space_.index(op)]; }
  double sub(Symbol a, Symbol b) const { return costs_[space_.sub_index(a, b)]; }
  double del(Symbol a) const { return costs_[space_.del_index(a)]; }
  double ins(Symbol b) const { return costs_[space_.ins_index(b)]; }

 private:
  Alphabet source_;
  Alphabet target_;
  EditSpace space_;
  std::vector<double> costs_;
};

struct ClassicResult {
  double cost = 0.0;
  Alignment alignment;  // ends with termination
};

// Minimum-cost alignment by dynamic programming. Ties prefer substitution,
// then deletion, then insertion.
ClassicResult classic_edit_distance(const SymbolString& x, const SymbolString& y, const CostFunction& c);

// Cost only, O(|y|) memory.
double classic_edit_cost(const SymbolString& x, const SymbolString& y, const CostFunction& c);

}  // namespace stochedit
