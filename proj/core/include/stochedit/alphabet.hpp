#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stochedit {

using Symbol = std::uint32_t;

// A string is a sequence of indices into its alphabet.
using SymbolString = std::vector<Symbol>;

// Tokens that can never be alphabet members.
inline constexpr std::string_view kEpsilonToken = "<eps>";
inline constexpr std::string_view kEndToken = "#";

/// Finite ordered set of opaque tokens. Tokens may be multi-character
/// (phoneme names) but never contain whitespace.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }

  const std::string& symbol(Symbol s) const { return symbols_.at(s); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  std::optional<Symbol> find(std::string_view token) const;
  // Throws InputError for tokens not in the alphabet.
  Symbol index(std::string_view token) const;

  // Whitespace-separated tokens to a string over this alphabet.
  SymbolString encode(std::string_view text) const;
  SymbolString encode(std::span<const std::string> tokens) const;
  // Space-joined tokens; the empty string decodes to "".
  std::string decode(const SymbolString& s) const;

  bool contains(const SymbolString& s) const;
  // Throws InputError naming `what` if any symbol is out of range.
  void check(const SymbolString& s, std::string_view what) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Symbol> index_;
};

// Splits on ASCII whitespace.
std::vector<std::string> split_tokens(std::string_view text);

}  // namespace stochedit
