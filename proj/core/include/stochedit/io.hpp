#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stochedit/alphabet.hpp"
#include "stochedit/classifier.hpp"
#include "stochedit/em.hpp"
#include "stochedit/factored.hpp"
#include "stochedit/lexicon.hpp"
#include "stochedit/mixture.hpp"
#include "stochedit/transducer.hpp"

namespace stochedit::io {

// Model files are line-oriented text:
//
//   stochedit-model 1 <kind>
//   source <tokens...>
//   target <tokens...>
//   <records>
//
// with natural-log parameters written as round-trip decimal. Kinds:
//   transducer  sub a b lp | del a lp | ins b lp | end lp
//   factored    omega lp_d lp_i lp_s | dsub a b lp | ddel a lp | dins b lp
//   mixture     component lp_mu, followed by that component's transducer records
//   lexicon     entry<TAB>w<TAB>form tokens<TAB>lp
//   classifier  interpretation, adapt-word, adapt-entry, mixture records, entries
inline constexpr std::string_view kMagic = "stochedit-model";
inline constexpr int kFormatVersion = 1;

enum class ModelKind { transducer, factored, mixture, lexicon, classifier };

std::string_view to_string(ModelKind kind);

void save(std::ostream& os, const Transducer& t);
void save(std::ostream& os, const FactoredTransducer& f);
void save(std::ostream& os, const MixtureTransducer& m);
void save(std::ostream& os, const Lexicon& lexicon);
void save(std::ostream& os, const ClassifierModel& m);

// Reads the header without consuming the stream's content beyond it.
ModelKind peek_kind(std::istream& is, std::string_view name = "<stream>");

Transducer load_transducer(std::istream& is, std::string_view name = "<stream>");
FactoredTransducer load_factored(std::istream& is, std::string_view name = "<stream>");
MixtureTransducer load_mixture(std::istream& is, std::string_view name = "<stream>");
Lexicon load_lexicon(std::istream& is, std::string_view name = "<stream>");
ClassifierModel load_classifier(std::istream& is, std::string_view name = "<stream>");

// Whitespace-separated tokens; lines starting with '#' are comments.
Alphabet read_alphabet(std::istream& is, std::string_view name = "<stream>");
void write_alphabet(std::ostream& os, const Alphabet& alphabet);

/// Two TAB-separated token fields per line, before alphabet resolution.
struct TokenLines {
  std::vector<std::vector<std::string>> left;
  std::vector<std::vector<std::string>> right;
  std::vector<std::size_t> line_numbers;
};

TokenLines read_token_lines(std::istream& is, std::string_view name = "<stream>");
// Sorted distinct tokens of a field.
Alphabet infer_alphabet(const std::vector<std::vector<std::string>>& field);

// `x-tokens TAB y-tokens` per line.
PairCorpus encode_pair_corpus(const TokenLines& lines, const Alphabet& source, const Alphabet& target,
                              std::string_view name = "<stream>");
// `class TAB y-tokens` per line.
LabeledCorpus encode_labeled_corpus(const TokenLines& lines, const Alphabet& target,
                                    std::string_view name = "<stream>");

PairCorpus read_pair_corpus(std::istream& is, const Alphabet& source, const Alphabet& target,
                            std::string_view name = "<stream>");
LabeledCorpus read_labeled_corpus(std::istream& is, const Alphabet& target, std::string_view name = "<stream>");

void write_pair_corpus(std::ostream& os, const PairCorpus& corpus, const Alphabet& source, const Alphabet& target);
void write_labeled_corpus(std::ostream& os, const LabeledCorpus& corpus, const Alphabet& target);

// Lexicon as plain `class TAB form-tokens [TAB weight]` lines. Without
// weights the uniform word/entry hierarchy is used.
Lexicon read_lexicon_tsv(std::istream& is, const Alphabet& alphabet, std::string_view name = "<stream>");

// Path helpers; throw InputError when a file cannot be opened.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace stochedit::io
