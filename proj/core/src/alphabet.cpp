#include "stochedit/alphabet.hpp"

#include <cctype>

#include "stochedit/edit_op.hpp"
#include "stochedit/errors.hpp"

namespace stochedit {

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ConfigError("alphabet must not be empty");
  index_.reserve(symbols_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const std::string& s = symbols_[i];
    if (s.empty()) throw ConfigError("alphabet symbols must be non-empty");
    if (s == kEpsilonToken || s == kEndToken) throw ConfigError("reserved token in alphabet: " + s);
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c))) throw ConfigError("alphabet symbol contains whitespace: '" + s + "'");
    }
    if (!index_.emplace(s, static_cast<Symbol>(i)).second) throw ConfigError("duplicate alphabet symbol: " + s);
  }
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::index(std::string_view token) const {
  if (auto s = find(token)) return *s;
  throw InputError("unknown token '" + std::string(token) + "'");
}

SymbolString Alphabet::encode(std::string_view text) const {
  const auto tokens = split_tokens(text);
  return encode(tokens);
}

SymbolString Alphabet::encode(std::span<const std::string> tokens) const {
  SymbolString out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) out.push_back(index(tok));
  return out;
}

std::string Alphabet::decode(const SymbolString& s) const {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += symbol(s[i]);
  }
  return out;
}

bool Alphabet::contains(const SymbolString& s) const {
  for (Symbol c : s) {
    if (c >= symbols_.size()) return false;
  }
  return true;
}

void Alphabet::check(const SymbolString& s, std::string_view what) const {
  if (!contains(s)) throw InputError(std::string(what) + " contains a symbol outside its alphabet");
}

std::size_t EditSpace::index(const EditOp& op) const {
  switch (op.kind) {
    case OpKind::substitution:
      return sub_index(op.a, op.b);
    case OpKind::deletion:
      return del_index(op.a);
    case OpKind::insertion:
      return ins_index(op.b);
    case OpKind::termination:
      break;
  }
  return end_index();
}

EditOp EditSpace::op(std::size_t i) const {
  const std::size_t n_sub = size_a_ * size_b_;
  if (i < n_sub) return EditOp::sub(static_cast<Symbol>(i / size_b_), static_cast<Symbol>(i % size_b_));
  i -= n_sub;
  if (i < size_a_) return EditOp::del(static_cast<Symbol>(i));
  i -= size_a_;
  if (i < size_b_) return EditOp::ins(static_cast<Symbol>(i));
  return EditOp::end();
}

Alignment make_alignment(std::vector<EditOp> ops) {
  Alignment al;
  for (const EditOp& op : ops) {
    if (op.kind == OpKind::substitution || op.kind == OpKind::deletion) al.x.push_back(op.a);
    if (op.kind == OpKind::substitution || op.kind == OpKind::insertion) al.y.push_back(op.b);
  }
  al.ops = std::move(ops);
  return al;
}

}  // namespace stochedit
