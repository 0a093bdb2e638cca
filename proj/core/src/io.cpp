#include "stochedit/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "stochedit/errors.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit::io {

namespace {

std::string fmt(double v) {
  if (v == kLogZero) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank_or_comment(const std::string& line) {
  const std::size_t p = line.find_first_not_of(" \t");
  return p == std::string::npos || line[p] == '#';
}

/// Line source that remembers positions for error messages.
class Reader {
 public:
  Reader(std::istream& is, std::string_view name) : is_(is), name_(name) {}

  // Next non-blank, non-comment line.
  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++line_no_;
      strip_cr(line);
      if (!is_blank_or_comment(line)) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw InputError(std::string(name_) + ":" + std::to_string(line_no_) + ": " + message);
  }

  double number(const std::string& token) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() || std::isnan(v)) fail("not a number: '" + token + "'");
    return v;
  }

  Alphabet alphabet(const std::vector<std::string>& tokens) const {
    try {
      return Alphabet(tokens);
    } catch (const ConfigError& e) {
      fail(e.what());
    }
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& is_;
  std::string_view name_;
  std::size_t line_no_ = 0;
};

std::optional<ModelKind> parse_kind(const std::string& s) {
  if (s == "transducer") return ModelKind::transducer;
  if (s == "factored") return ModelKind::factored;
  if (s == "mixture") return ModelKind::mixture;
  if (s == "lexicon") return ModelKind::lexicon;
  if (s == "classifier") return ModelKind::classifier;
  return std::nullopt;
}

void write_header(std::ostream& os, ModelKind kind) {
  os << kMagic << ' ' << kFormatVersion << ' ' << to_string(kind) << '\n';
}

ModelKind read_header(Reader& r) {
  std::string line;
  if (!r.next(line)) r.fail("empty model file");
  const auto tokens = split_tokens(line);
  if (tokens.size() != 3 || tokens[0] != kMagic) r.fail("missing '" + std::string(kMagic) + "' header");
  if (tokens[1] != std::to_string(kFormatVersion)) r.fail("unsupported format version " + tokens[1]);
  const auto kind = parse_kind(tokens[2]);
  if (!kind) r.fail("unknown model kind '" + tokens[2] + "'");
  return *kind;
}

void expect_kind(Reader& r, ModelKind want) {
  const ModelKind got = read_header(r);
  if (got != want)
    r.fail("expected a " + std::string(to_string(want)) + " model, found " + std::string(to_string(got)));
}

Alphabet read_named_alphabet(Reader& r, const std::string& keyword) {
  std::string line;
  if (!r.next(line)) r.fail("missing '" + keyword + "' line");
  auto tokens = split_tokens(line);
  if (tokens.empty() || tokens[0] != keyword) r.fail("expected '" + keyword + "' line");
  tokens.erase(tokens.begin());
  return r.alphabet(tokens);
}

void write_named_alphabet(std::ostream& os, const std::string& keyword, const Alphabet& a) {
  os << keyword;
  for (const auto& s : a.symbols()) os << ' ' << s;
  os << '\n';
}

void write_transducer_records(std::ostream& os, const Transducer& t) {
  const auto& A = t.source();
  const auto& B = t.target();
  for (Symbol a = 0; a < A.size(); ++a) {
    for (Symbol b = 0; b < B.size(); ++b) os << "sub " << A.symbol(a) << ' ' << B.symbol(b) << ' ' << fmt(t.log_sub(a, b)) << '\n';
  }
  for (Symbol a = 0; a < A.size(); ++a) os << "del " << A.symbol(a) << ' ' << fmt(t.log_del(a)) << '\n';
  for (Symbol b = 0; b < B.size(); ++b) os << "ins " << B.symbol(b) << ' ' << fmt(t.log_ins(b)) << '\n';
  os << "end " << fmt(t.log_end()) << '\n';
}

/// Collects transducer records into a log table; unspecified entries are zero.
class TransducerRecords {
 public:
  TransducerRecords(const Alphabet& a, const Alphabet& b)
      : a_(a), b_(b), space_(a.size(), b.size()), logs_(space_.size(), kLogZero), seen_(space_.size(), false) {}

  // Returns false when the record is not a transducer record.
  bool take(Reader& r, const std::vector<std::string>& tok) {
    std::size_t idx;
    std::size_t value_pos;
    if (tok[0] == "sub" && tok.size() == 4) {
      idx = space_.sub_index(symbol(r, a_, tok[1]), symbol(r, b_, tok[2]));
      value_pos = 3;
    } else if (tok[0] == "del" && tok.size() == 3) {
      idx = space_.del_index(symbol(r, a_, tok[1]));
      value_pos = 2;
    } else if (tok[0] == "ins" && tok.size() == 3) {
      idx = space_.ins_index(symbol(r, b_, tok[1]));
      value_pos = 2;
    } else if (tok[0] == "end" && tok.size() == 2) {
      idx = space_.end_index();
      value_pos = 1;
    } else if (tok[0] == "sub" || tok[0] == "del" || tok[0] == "ins" || tok[0] == "end") {
      r.fail("malformed '" + tok[0] + "' record");
    } else {
      return false;
    }
    if (seen_[idx]) r.fail("duplicate record for one edit operation");
    seen_[idx] = true;
    logs_[idx] = r.number(tok[value_pos]);
    if (logs_[idx] > 1e-12) r.fail("log-probability must be <= 0");
    return true;
  }

  Transducer build(Reader& r) {
    try {
      return Transducer::from_log_probabilities(a_, b_, logs_);
    } catch (const ConfigError& e) {
      r.fail(e.what());
    }
  }

 private:
  static Symbol symbol(Reader& r, const Alphabet& alphabet, const std::string& token) {
    const auto s = alphabet.find(token);
    if (!s) r.fail("unknown symbol '" + token + "'");
    return *s;
  }

  const Alphabet& a_;
  const Alphabet& b_;
  EditSpace space_;
  std::vector<double> logs_;
  std::vector<bool> seen_;
};

void write_entries(std::ostream& os, const Lexicon& lex) {
  for (std::size_t e = 0; e < lex.size(); ++e) {
    os << "entry\t" << lex.class_name(lex.entry(e).cls) << '\t' << lex.alphabet().decode(lex.form_of(e)) << '\t'
       << fmt(lex.entry(e).log_prob) << '\n';
  }
}

/// Collects lexicon `entry` lines.
struct EntryRecords {
  std::vector<std::string> classes;
  std::vector<SymbolString> forms;
  std::vector<double> logs;

  bool take(Reader& r, const std::string& line, const Alphabet& alphabet) {
    if (line.rfind("entry\t", 0) != 0) return false;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) r.fail("entry lines need class, form and log-probability fields");
    if (fields[1].empty()) r.fail("empty class name");
    SymbolString form;
    try {
      form = alphabet.encode(fields[2]);
    } catch (const InputError& e) {
      r.fail(e.what());
    }
    classes.push_back(fields[1]);
    forms.push_back(std::move(form));
    logs.push_back(r.number(fields[3]));
    return true;
  }

  Lexicon build(Reader& r, const Alphabet& alphabet) const {
    Lexicon lex(alphabet);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (lex.add(classes[i], forms[i], 1.0) != i) r.fail("duplicate lexicon entry for class '" + classes[i] + "'");
    }
    try {
      lex.set_log_probabilities(logs);
    } catch (const ConfigError& e) {
      r.fail(e.what());
    }
    return lex;
  }
};

MixtureTransducer build_mixture(Reader& r, std::vector<TransducerRecords>& records,
                                const std::vector<double>& log_weights) {
  if (records.empty()) r.fail("mixture has no components");
  std::vector<Transducer> components;
  for (auto& rec : records) components.push_back(rec.build(r));
  try {
    return MixtureTransducer::from_log_weights(std::move(components), log_weights);
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
}

void save_mixture_body(std::ostream& os, const MixtureTransducer& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << "component " << fmt(m.log_weight(i)) << '\n';
    write_transducer_records(os, m.component(i));
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::transducer: return "transducer";
    case ModelKind::factored: return "factored";
    case ModelKind::mixture: return "mixture";
    case ModelKind::lexicon: return "lexicon";
    case ModelKind::classifier: return "classifier";
  }
  return "unknown";
}

void save(std::ostream& os, const Transducer& t) {
  write_header(os, ModelKind::transducer);
  write_named_alphabet(os, "source", t.source());
  write_named_alphabet(os, "target", t.target());
  write_transducer_records(os, t);
}

void save(std::ostream& os, const FactoredTransducer& f) {
  write_header(os, ModelKind::factored);
  write_named_alphabet(os, "source", f.source());
  write_named_alphabet(os, "target", f.target());
  os << "omega " << fmt(f.log_omega_del()) << ' ' << fmt(f.log_omega_ins()) << ' ' << fmt(f.log_omega_sub()) << '\n';
  const auto& A = f.source();
  const auto& B = f.target();
  for (Symbol a = 0; a < A.size(); ++a) {
    for (Symbol b = 0; b < B.size(); ++b) os << "dsub " << A.symbol(a) << ' ' << B.symbol(b) << ' ' << fmt(f.log_sub(a, b)) << '\n';
  }
  for (Symbol a = 0; a < A.size(); ++a) os << "ddel " << A.symbol(a) << ' ' << fmt(f.log_del(a)) << '\n';
  for (Symbol b = 0; b < B.size(); ++b) os << "dins " << B.symbol(b) << ' ' << fmt(f.log_ins(b)) << '\n';
}

void save(std::ostream& os, const MixtureTransducer& m) {
  write_header(os, ModelKind::mixture);
  write_named_alphabet(os, "source", m.source());
  write_named_alphabet(os, "target", m.target());
  save_mixture_body(os, m);
}

void save(std::ostream& os, const Lexicon& lexicon) {
  write_header(os, ModelKind::lexicon);
  write_named_alphabet(os, "alphabet", lexicon.alphabet());
  write_entries(os, lexicon);
}

void save(std::ostream& os, const ClassifierModel& m) {
  write_header(os, ModelKind::classifier);
  write_named_alphabet(os, "source", m.channel.source());
  write_named_alphabet(os, "target", m.channel.target());
  os << "interpretation " << (m.interpretation == Interpretation::stochastic ? "stochastic" : "viterbi") << '\n';
  os << "adapt-word " << (m.adapt_word ? 1 : 0) << '\n';
  os << "adapt-entry " << (m.adapt_entry ? 1 : 0) << '\n';
  save_mixture_body(os, m.channel);
  write_entries(os, m.lexicon);
}

ModelKind peek_kind(std::istream& is, std::string_view name) {
  const auto pos = is.tellg();
  Reader r(is, name);
  const ModelKind kind = read_header(r);
  is.clear();
  if (pos != std::streampos(-1)) is.seekg(pos);
  return kind;
}

Transducer load_transducer(std::istream& is, std::string_view name) {
  Reader r(is, name);
  expect_kind(r, ModelKind::transducer);
  const Alphabet A = read_named_alphabet(r, "source");
  const Alphabet B = read_named_alphabet(r, "target");
  TransducerRecords rec(A, B);
  std::string line;
  while (r.next(line)) {
    const auto tok = split_tokens(line);
    if (!rec.take(r, tok)) r.fail("unknown record '" + tok[0] + "'");
  }
  return rec.build(r);
}

FactoredTransducer load_factored(std::istream& is, std::string_view name) {
  Reader r(is, name);
  expect_kind(r, ModelKind::factored);
  const Alphabet A = read_named_alphabet(r, "source");
  const Alphabet B = read_named_alphabet(r, "target");
  std::optional<FactoredTransducer::Omega> omega;
  std::vector<double> ld(A.size(), kLogZero), li(B.size(), kLogZero), ls(A.size() * B.size(), kLogZero);
  auto sym = [&](const Alphabet& alphabet, const std::string& token) {
    const auto s = alphabet.find(token);
    if (!s) r.fail("unknown symbol '" + token + "'");
    return *s;
  };
  std::string line;
  while (r.next(line)) {
    const auto tok = split_tokens(line);
    if (tok[0] == "omega" && tok.size() == 4) {
      if (omega) r.fail("duplicate omega record");
      omega = FactoredTransducer::Omega{r.number(tok[1]), r.number(tok[2]), r.number(tok[3])};
    } else if (tok[0] == "dsub" && tok.size() == 4) {
      ls[sym(A, tok[1]) * B.size() + sym(B, tok[2])] = r.number(tok[3]);
    } else if (tok[0] == "ddel" && tok.size() == 3) {
      ld[sym(A, tok[1])] = r.number(tok[2]);
    } else if (tok[0] == "dins" && tok.size() == 3) {
      li[sym(B, tok[1])] = r.number(tok[2]);
    } else {
      r.fail("unknown or malformed record '" + tok[0] + "'");
    }
  }
  if (!omega) r.fail("missing omega record");
  try {
    return FactoredTransducer::from_log_probabilities(A, B, *omega, ld, li, ls);
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
}

MixtureTransducer load_mixture(std::istream& is, std::string_view name) {
  Reader r(is, name);
  expect_kind(r, ModelKind::mixture);
  const Alphabet A = read_named_alphabet(r, "source");
  const Alphabet B = read_named_alphabet(r, "target");
  std::vector<TransducerRecords> records;
  std::vector<double> weights;
  std::string line;
  while (r.next(line)) {
    const auto tok = split_tokens(line);
    if (tok[0] == "component" && tok.size() == 2) {
      records.emplace_back(A, B);
      weights.push_back(r.number(tok[1]));
    } else if (records.empty() || !records.back().take(r, tok)) {
      r.fail("unexpected record '" + tok[0] + "'");
    }
  }
  return build_mixture(r, records, weights);
}

Lexicon load_lexicon(std::istream& is, std::string_view name) {
  Reader r(is, name);
  expect_kind(r, ModelKind::lexicon);
  const Alphabet alphabet = read_named_alphabet(r, "alphabet");
  EntryRecords entries;
  std::string line;
  while (r.next(line)) {
    if (!entries.take(r, line, alphabet)) r.fail("expected an entry line");
  }
  if (entries.classes.empty()) r.fail("lexicon has no entries");
  return entries.build(r, alphabet);
}

ClassifierModel load_classifier(std::istream& is, std::string_view name) {
  Reader r(is, name);
  expect_kind(r, ModelKind::classifier);
  const Alphabet A = read_named_alphabet(r, "source");
  const Alphabet B = read_named_alphabet(r, "target");
  ClassifierModel m;
  std::vector<TransducerRecords> records;
  std::vector<double> weights;
  EntryRecords entries;
  auto flag = [&](const std::string& v) {
    if (v == "1") return true;
    if (v == "0") return false;
    r.fail("expected 0 or 1, found '" + v + "'");
  };
  std::string line;
  while (r.next(line)) {
    if (entries.take(r, line, A)) continue;
    const auto tok = split_tokens(line);
    if (tok[0] == "interpretation" && tok.size() == 2) {
      if (tok[1] == "stochastic") {
        m.interpretation = Interpretation::stochastic;
      } else if (tok[1] == "viterbi") {
        m.interpretation = Interpretation::viterbi;
      } else {
        r.fail("unknown interpretation '" + tok[1] + "'");
      }
    } else if (tok[0] == "adapt-word" && tok.size() == 2) {
      m.adapt_word = flag(tok[1]);
    } else if (tok[0] == "adapt-entry" && tok.size() == 2) {
      m.adapt_entry = flag(tok[1]);
    } else if (tok[0] == "component" && tok.size() == 2) {
      records.emplace_back(A, B);
      weights.push_back(r.number(tok[1]));
    } else if (records.empty() || !records.back().take(r, tok)) {
      r.fail("unexpected record '" + tok[0] + "'");
    }
  }
  m.channel = build_mixture(r, records, weights);
  if (entries.classes.empty()) r.fail("classifier has no lexicon entries");
  m.lexicon = entries.build(r, A);
  return m;
}

Alphabet read_alphabet(std::istream& is, std::string_view name) {
  Reader r(is, name);
  std::vector<std::string> tokens;
  std::string line;
  while (r.next(line)) {
    for (auto& t : split_tokens(line)) tokens.push_back(std::move(t));
  }
  if (tokens.empty()) r.fail("alphabet file has no symbols");
  return r.alphabet(tokens);
}

void write_alphabet(std::ostream& os, const Alphabet& alphabet) {
  for (const auto& s : alphabet.symbols()) os << s << '\n';
}

TokenLines read_token_lines(std::istream& is, std::string_view name) {
  TokenLines out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank_or_comment(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2)
      throw InputError(std::string(name) + ":" + std::to_string(line_no) + ": expected two TAB-separated fields");
    out.left.push_back(split_tokens(fields[0]));
    out.right.push_back(split_tokens(fields[1]));
    out.line_numbers.push_back(line_no);
  }
  return out;
}

Alphabet infer_alphabet(const std::vector<std::vector<std::string>>& field) {
  std::set<std::string> symbols;
  for (const auto& tokens : field) symbols.insert(tokens.begin(), tokens.end());
  if (symbols.empty()) throw InputError("cannot infer an alphabet from empty strings");
  return Alphabet(std::vector<std::string>(symbols.begin(), symbols.end()));
}

namespace {

SymbolString encode_field(const Alphabet& alphabet, const std::vector<std::string>& tokens, std::string_view name,
                          std::size_t line_no) {
  try {
    return alphabet.encode(tokens);
  } catch (const InputError& e) {
    throw InputError(std::string(name) + ":" + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace

PairCorpus encode_pair_corpus(const TokenLines& lines, const Alphabet& source, const Alphabet& target,
                              std::string_view name) {
  PairCorpus c;
  c.pairs.reserve(lines.left.size());
  for (std::size_t i = 0; i < lines.left.size(); ++i) {
    c.pairs.emplace_back(encode_field(source, lines.left[i], name, lines.line_numbers[i]),
                         encode_field(target, lines.right[i], name, lines.line_numbers[i]));
  }
  return c;
}

LabeledCorpus encode_labeled_corpus(const TokenLines& lines, const Alphabet& target, std::string_view name) {
  LabeledCorpus c;
  c.samples.reserve(lines.left.size());
  for (std::size_t i = 0; i < lines.left.size(); ++i) {
    if (lines.left[i].size() != 1)
      throw InputError(std::string(name) + ":" + std::to_string(lines.line_numbers[i]) +
                       ": class label must be a single token");
    c.samples.push_back({lines.left[i][0], encode_field(target, lines.right[i], name, lines.line_numbers[i])});
  }
  return c;
}

PairCorpus read_pair_corpus(std::istream& is, const Alphabet& source, const Alphabet& target, std::string_view name) {
  return encode_pair_corpus(read_token_lines(is, name), source, target, name);
}

LabeledCorpus read_labeled_corpus(std::istream& is, const Alphabet& target, std::string_view name) {
  return encode_labeled_corpus(read_token_lines(is, name), target, name);
}

void write_pair_corpus(std::ostream& os, const PairCorpus& corpus, const Alphabet& source, const Alphabet& target) {
  for (const auto& [x, y] : corpus.pairs) os << source.decode(x) << '\t' << target.decode(y) << '\n';
}

void write_labeled_corpus(std::ostream& os, const LabeledCorpus& corpus, const Alphabet& target) {
  for (const auto& s : corpus.samples) os << s.cls << '\t' << target.decode(s.y) << '\n';
}

Lexicon read_lexicon_tsv(std::istream& is, const Alphabet& alphabet, std::string_view name) {
  Reader r(is, name);
  Lexicon lex(alphabet);
  std::optional<bool> weighted;
  std::string line;
  while (r.next(line)) {
    const auto fields = split_tabs(line);
    if (fields.size() != 2 && fields.size() != 3) r.fail("expected 'class TAB form [TAB weight]'");
    const auto cls = split_tokens(fields[0]);
    if (cls.size() != 1) r.fail("class label must be a single token");
    const bool has_weight = fields.size() == 3;
    if (weighted && *weighted != has_weight) r.fail("either every lexicon line has a weight or none does");
    weighted = has_weight;
    const double w = has_weight ? r.number(fields[2]) : 1.0;
    if (!(w >= 0.0)) r.fail("lexicon weights must be nonnegative");
    SymbolString form;
    try {
      form = alphabet.encode(fields[1]);
    } catch (const InputError& e) {
      r.fail(e.what());
    }
    lex.add(cls[0], form, w);
  }
  if (lex.empty()) r.fail("lexicon has no entries");
  try {
    if (*weighted) {
      lex.normalize();
    } else {
      lex.set_uniform_hierarchy();
    }
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
  return lex;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw InputError("error writing '" + path.string() + "'");
}

}  // namespace stochedit::io
