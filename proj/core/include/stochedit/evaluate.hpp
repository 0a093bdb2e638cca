#pragma once

#include <cstddef>
#include <cstdint>

#include "stochedit/alphabet.hpp"
#include "stochedit/edit_op.hpp"
#include "stochedit/lattice.hpp"
#include "stochedit/transducer.hpp"

namespace stochedit {

// Forward lattice. alpha(t, v) = ln p(x^t, y^v); the final cell also carries
// the termination factor, so alpha(T, V) = ln p(x, y).
LogMatrix forward_evaluate(const SymbolString& x, const SymbolString& y, const Transducer& t);

// Backward lattice. beta(t, v) = ln p(x_{t+1..T}, y_{v+1..V} # | state <t,v>).
LogMatrix backward_evaluate(const SymbolString& x, const SymbolString& y, const Transducer& t);

// ln p(x, y) in O(|y|) memory.
double log_joint_probability(const SymbolString& x, const SymbolString& y, const Transducer& t);
double joint_probability(const SymbolString& x, const SymbolString& y, const Transducer& t);

// -log2 p(x, y); +inf when the pair is unreachable.
double stochastic_distance(const SymbolString& x, const SymbolString& y, const Transducer& t);

struct ViterbiResult {
  double bits = kInfinity;
  Alignment alignment;  // empty when bits is infinite
};

// Most likely terminated edit sequence and its cost in bits. Ties prefer
// substitution, then deletion, then insertion.
ViterbiResult viterbi_distance(const SymbolString& x, const SymbolString& y, const Transducer& t);

// ln of the most likely edit sequence probability, without traceback.
double viterbi_log_probability(const SymbolString& x, const SymbolString& y, const Transducer& t);

// p(n) = (1 - p(#))^n p(#): probability of exactly n edits before termination.
double sequence_length_prob(std::size_t n, const Transducer& t);

// Draws i.i.d. operations until termination. Throws ConfigError if p(#) = 0.
Alignment generate(const Transducer& t, Rng& rng);
Alignment generate(const Transducer& t, std::uint64_t seed);

}  // namespace stochedit
