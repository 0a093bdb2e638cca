#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stochedit/alphabet.hpp"

namespace stochedit {

enum class OpKind : std::uint8_t { substitution, deletion, insertion, termination };

// One primitive edit. The null pair <eps,eps> has no representation.
struct EditOp {
  OpKind kind = OpKind::termination;
  Symbol a = 0;
  Symbol b = 0;

  static constexpr EditOp sub(Symbol a, Symbol b) { return {OpKind::substitution, a, b}; }
  static constexpr EditOp del(Symbol a) { return {OpKind::deletion, a, 0}; }
  static constexpr EditOp ins(Symbol b) { return {OpKind::insertion, 0, b}; }
  static constexpr EditOp end() { return {OpKind::termination, 0, 0}; }

  friend constexpr bool operator==(const EditOp&, const EditOp&) = default;
};

/// Dense indexing of E plus termination for alphabets of the given sizes:
/// substitutions first (row-major in a), then deletions, insertions, and
/// the termination symbol last.
class EditSpace {
 public:
  EditSpace() = default;
  EditSpace(std::size_t size_a, std::size_t size_b) : size_a_(size_a), size_b_(size_b) {}

  std::size_t size_a() const { return size_a_; }
  std::size_t size_b() const { return size_b_; }

  // |E|
  std::size_t num_edits() const { return size_a_ * size_b_ + size_a_ + size_b_; }
  // |E| + 1
  std::size_t size() const { return num_edits() + 1; }

  std::size_t sub_index(Symbol a, Symbol b) const { return a * size_b_ + b; }
  std::size_t del_index(Symbol a) const { return size_a_ * size_b_ + a; }
  std::size_t ins_index(Symbol b) const { return size_a_ * size_b_ + size_a_ + b; }
  std::size_t end_index() const { return num_edits(); }

  std::size_t index(const EditOp& op) const;
  EditOp op(std::size_t index) const;

  friend bool operator==(const EditSpace&, const EditSpace&) = default;

 private:
  std::size_t size_a_ = 0;
  std::size_t size_b_ = 0;
};

/// A terminated edit sequence together with the string pair it yields.
struct Alignment {
  std::vector<EditOp> ops;
  SymbolString x;
  SymbolString y;
};

// The yield map: reads the left and right components of an edit sequence.
Alignment make_alignment(std::vector<EditOp> ops);

}  // namespace stochedit
