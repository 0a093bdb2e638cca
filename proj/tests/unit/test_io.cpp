#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "stochedit/errors.hpp"
#include "stochedit/io.hpp"

using namespace stochedit;

namespace {

template <class T>
std::string dump(const T& model) {
  std::ostringstream os;
  io::save(os, model);
  return os.str();
}

std::vector<double> logs(const Transducer& t) {
  return {t.log_probabilities().begin(), t.log_probabilities().end()};
}

std::string error_of(const std::string& text) {
  std::istringstream is(text);
  try {
    io::load_transducer(is, "model.txt");
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

const Alphabet kAB({"a", "b"});

}  // namespace

TEST_CASE("transducer round trip is bit exact") {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const Alphabet A = oracle::letters(1 + rng() % 4), B = oracle::letters(1 + rng() % 4, 'p');
    Transducer t = random_transducer(A, B, rng);
    if (i % 5 == 0) t = oracle::from_ops(A, B, {{EditOp::sub(0, 0), 0.3}, {EditOp::end(), 0.7}});
    const std::string text = dump(t);
    std::istringstream is(text);
    CHECK(io::peek_kind(is) == io::ModelKind::transducer);
    const Transducer back = io::load_transducer(is);
    CHECK(back.source() == A);
    CHECK(back.target() == B);
    CHECK(logs(back) == logs(t));
    CHECK(dump(back) == text);
  }
}

TEST_CASE("other model kinds round trip") {
  Rng rng(2);
  const Alphabet A = oracle::letters(3), B = oracle::letters(2, 'p');

  const FactoredTransducer f = oracle::random_factored(A, B, rng);
  std::istringstream fs(dump(f));
  const FactoredTransducer fb = io::load_factored(fs);
  CHECK(fb.log_sub_probs() == f.log_sub_probs());
  CHECK(fb.log_del_probs() == f.log_del_probs());
  CHECK(fb.log_ins_probs() == f.log_ins_probs());
  CHECK(fb.log_omega_sub() == f.log_omega_sub());
  CHECK(dump(fb) == dump(f));

  const MixtureTransducer m({random_transducer(A, B, rng), random_transducer(A, B, rng)}, {0.3, 0.7});
  std::istringstream ms(dump(m));
  const MixtureTransducer mb = io::load_mixture(ms);
  CHECK(mb.log_weights() == m.log_weights());
  CHECK(logs(mb.component(1)) == logs(m.component(1)));

  Lexicon lex(A);
  lex.add("one", A.encode("a b"), 0.3);
  lex.add("two words", A.encode("c"), 0.6);
  lex.add("one", A.encode(""), 0.1);
  lex.normalize();
  std::istringstream ls(dump(lex));
  const Lexicon lb = io::load_lexicon(ls);
  REQUIRE(lb.size() == 3);
  for (std::size_t e = 0; e < 3; ++e) {
    CHECK(lb.entry(e).log_prob == lex.entry(e).log_prob);
    CHECK(lb.form_of(e) == lex.form_of(e));
    CHECK(lb.class_name(lb.entry(e).cls) == lex.class_name(lex.entry(e).cls));
  }

  ClassifierModel c;
  c.channel = m;
  c.lexicon = Lexicon(B);
  c.lexicon.add("w", B.encode("p q"), 1.0);
  c.lexicon.normalize();
  c.channel = MixtureTransducer({random_transducer(B, B, rng)}, {1.0});
  c.interpretation = Interpretation::viterbi;
  c.adapt_entry = false;
  std::istringstream cs(dump(c));
  const ClassifierModel cb = io::load_classifier(cs);
  CHECK(cb.interpretation == Interpretation::viterbi);
  CHECK(cb.adapt_word);
  CHECK_FALSE(cb.adapt_entry);
  CHECK(logs(cb.channel.component(0)) == logs(c.channel.component(0)));
  CHECK(dump(cb) == dump(c));
}

TEST_CASE("parse errors name the file and line") {
  const std::string good = dump(Transducer::uniform(Alphabet({"a"}), Alphabet({"b"})));
  CHECK(error_of(good).empty());
  CHECK(error_of("").find("model.txt") != std::string::npos);
  CHECK(error_of("not-a-model 1 transducer\n").find("model.txt:1") != std::string::npos);
  CHECK(error_of("stochedit-model 2 transducer\n").find("model.txt:1") != std::string::npos);

  std::string bad_value = good;
  bad_value.replace(bad_value.find("end ") + 4, std::string::npos, "oops\n");
  CHECK(error_of(bad_value).find("model.txt:") != std::string::npos);

  std::string unknown = good + "sub z b -1\n";
  const std::string msg = error_of(unknown);
  CHECK(msg.find("model.txt:") != std::string::npos);

  std::istringstream wrong_kind(good);
  CHECK_THROWS_AS(io::load_lexicon(wrong_kind), InputError);

  // A table that does not sum to one is rejected.
  std::string skew = good;
  skew.replace(skew.find("end ") + 4, std::string::npos, "-0.1\n");
  CHECK_FALSE(error_of(skew).empty());
}

TEST_CASE("corpus files") {
  std::istringstream alphabet_text("# symbols\na b\n\nc\n");
  const Alphabet A = io::read_alphabet(alphabet_text);
  CHECK(A.size() == 3);

  std::istringstream pairs("a b\tc\n\n# comment\n\tb\n");
  const PairCorpus c = io::read_pair_corpus(pairs, A, A);
  REQUIRE(c.size() == 2);
  CHECK(c.pairs[1].first.empty());
  std::ostringstream out;
  io::write_pair_corpus(out, c, A, A);
  std::istringstream again(out.str());
  const PairCorpus c2 = io::read_pair_corpus(again, A, A);
  CHECK(c2.pairs == c.pairs);

  std::istringstream bad_symbol("a\tz\n");
  try {
    io::read_pair_corpus(bad_symbol, A, A, "pairs.tsv");
    FAIL("expected an input error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("pairs.tsv:1") != std::string::npos);
  }
  std::istringstream three_fields("a\tb\tc\n");
  CHECK_THROWS_AS(io::read_pair_corpus(three_fields, A, A), InputError);

  std::istringstream labeled("cat\ta b\ndog\tc\n");
  const LabeledCorpus lc = io::read_labeled_corpus(labeled, A);
  REQUIRE(lc.size() == 2);
  CHECK(lc.samples[1].cls == "dog");

  std::istringstream lines("b a\tx\nc\ty\n");
  const io::TokenLines tl = io::read_token_lines(lines);
  CHECK(io::infer_alphabet(tl.left).symbols() == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("lexicon tsv") {
  std::istringstream unweighted("one\ta b\none\ta\ntwo\tb\n");
  const Lexicon u = io::read_lexicon_tsv(unweighted, kAB);
  CHECK(u.entry(0).prob() == doctest::Approx(0.25));
  CHECK(u.entry(2).prob() == doctest::Approx(0.5));

  std::istringstream weighted("one\ta b\t3\ntwo\tb\t1\n");
  const Lexicon w = io::read_lexicon_tsv(weighted, kAB);
  CHECK(w.entry(0).prob() == doctest::Approx(0.75));

  std::istringstream mixed("one\ta b\t3\ntwo\tb\n");
  CHECK_THROWS_AS(io::read_lexicon_tsv(mixed, kAB), InputError);
  std::istringstream negative("one\ta\t-1\n");
  CHECK_THROWS_AS(io::read_lexicon_tsv(negative, kAB), InputError);
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(io::read_file("/nonexistent/stochedit/file"), InputError);
}
