#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracle.hpp"
#include "stochedit/classifier.hpp"
#include "stochedit/errors.hpp"
#include "stochedit/evaluate.hpp"

using namespace stochedit;
using doctest::Approx;

namespace {

const Alphabet kAB({"a", "b"});

Lexicon small_lexicon() {
  Lexicon lex(kAB);
  lex.add("ab", kAB.encode("a b"), 1.0);
  lex.add("ab", kAB.encode("a b b"), 1.0);
  lex.add("ba", kAB.encode("b a"), 1.0);
  lex.add("bb", kAB.encode("b b"), 1.0);
  lex.add("homophone", kAB.encode("b a"), 1.0);
  lex.normalize();
  return lex;
}

// Copying is likely, every other edit rare.
Transducer copy_biased() {
  return oracle::from_ops(kAB, kAB,
                          {{EditOp::sub(0, 0), 0.3}, {EditOp::sub(1, 1), 0.3}, {EditOp::sub(0, 1), 0.05},
                           {EditOp::sub(1, 0), 0.05}, {EditOp::del(0), 0.05}, {EditOp::del(1), 0.05},
                           {EditOp::ins(0), 0.05}, {EditOp::ins(1), 0.05}, {EditOp::end(), 0.1}});
}

LabeledCorpus random_labeled(const Lexicon& lex, const Transducer& t, std::size_t n, Rng& rng) {
  LabeledCorpus c;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t e = rng() % lex.size();
    const Alignment a = generate(t, rng);
    // Keep the channel noise but anchor the output on the prototype.
    SymbolString y = lex.form_of(e);
    if (!a.y.empty()) y.push_back(a.y.front());
    c.samples.push_back({lex.class_name(lex.entry(e).cls), y});
  }
  return c;
}

// sum over prototypes x of class w of p(w | x) p(x, y), by enumeration.
double brute_class_joint(const std::string& w, const SymbolString& y, const ClassifierModel& m) {
  const Lexicon& lex = m.lexicon;
  double total = 0.0;
  for (std::size_t e = 0; e < lex.size(); ++e) {
    if (lex.class_name(lex.entry(e).cls) != w) continue;
    double form_total = 0.0;
    for (std::size_t f = 0; f < lex.size(); ++f)
      if (lex.entry(f).form == lex.entry(e).form) form_total += lex.entry(f).prob();
    double pxy = 0.0;
    for (std::size_t i = 0; i < m.channel.size(); ++i) {
      const oracle::Summary s = oracle::enumerate(lex.form_of(e), y, m.channel.component(i));
      pxy += m.channel.weight(i) * (m.interpretation == Interpretation::stochastic ? s.total : s.best);
    }
    total += lex.entry(e).prob() / form_total * pxy;
  }
  return total;
}

}  // namespace

TEST_CASE("class joint probabilities match enumeration") {
  Rng rng(2);
  for (const Interpretation interp : {Interpretation::stochastic, Interpretation::viterbi}) {
    for (int i = 0; i < 30; ++i) {
      ClassifierModel m = make_classifier(random_transducer(kAB, kAB, rng), small_lexicon(), interp);
      m.lexicon.set_probabilities({0.1, 0.3, 0.2, 0.25, 0.15});
      if (i % 2) m.channel = tied_untied_mixture(random_transducer(kAB, kAB, rng), random_transducer(kAB, kAB, rng));
      const SymbolString y = oracle::random_string(2, 3, rng);
      const auto joint = class_log_joint(y, m);
      const auto post = class_posteriors(y, m);
      double z = 0.0;
      for (std::size_t c = 0; c < joint.size(); ++c) {
        const double expected = brute_class_joint(m.lexicon.class_name(c), y, m);
        REQUIRE(std::exp(joint[c]) == Approx(expected).epsilon(1e-10));
        z += expected;
      }
      for (std::size_t c = 0; c < post.size(); ++c)
        REQUIRE(post[c] == Approx(brute_class_joint(m.lexicon.class_name(c), y, m) / z).epsilon(1e-10));
      CHECK(std::accumulate(post.begin(), post.end(), 0.0) == Approx(1.0));
    }
  }
}

TEST_CASE("homophones tie and share credit") {
  const ClassifierModel m = make_classifier(copy_biased(), small_lexicon());
  const Decision d = classify(kAB.encode("b a"), m);
  REQUIRE(d.labels.size() == 2);
  CHECK(d.labels[0] == "ba");
  CHECK(d.labels[1] == "homophone");
  const LabeledCorpus truth{{{"ba", kAB.encode("b a")}}};
  const std::vector<Decision> ds{d};
  CHECK(word_error_rate(ds, truth) == Approx(0.5));
}

TEST_CASE("unreachable observations give an empty decision") {
  Lexicon lex(kAB);
  lex.add("a", kAB.encode("a"), 1.0);
  lex.normalize();
  const Transducer copy_a = oracle::from_ops(kAB, kAB, {{EditOp::sub(0, 0), 0.5}, {EditOp::end(), 0.5}});
  const ClassifierModel m = make_classifier(copy_a, lex);
  const Decision d = classify(kAB.encode("b"), m);
  CHECK(d.empty());
  for (double p : class_posteriors(kAB.encode("b"), m)) CHECK(p == 0.0);
  const LabeledCorpus truth{{{"a", kAB.encode("b")}}};
  CHECK(word_error_rate(std::vector<Decision>{d}, truth) == 1.0);
}

TEST_CASE("word error rate") {
  const LabeledCorpus truth{{{"x", {}}, {"y", {}}, {"z", {}}, {"x", {}}}};
  std::vector<Decision> ds(4);
  ds[0].labels = {"x"};
  ds[1].labels = {"x"};
  ds[2].labels = {"z", "y", "x"};
  ds[3].labels = {"x", "y"};
  CHECK(word_error_rate(ds, truth) == Approx(1.0 - (1.0 + 0.0 + 1.0 / 3 + 0.5) / 4));
  CHECK_THROWS_AS(word_error_rate(std::vector<Decision>(3), truth), ConfigError);
}

TEST_CASE("utility-weighted decisions") {
  Rng rng(9);
  const ClassifierModel m = make_classifier(random_transducer(kAB, kAB, rng), small_lexicon());
  const SymbolString y = kAB.encode("a b");
  const Decision plain = classify(y, m);
  const Decision same = classify(y, m, UtilityFunction::identity(m.lexicon.classes()));
  CHECK(plain.labels == same.labels);

  // Deciding "bb" is always worth more than any correct answer.
  UtilityFunction mu = UtilityFunction::identity(m.lexicon.classes());
  for (const auto& w : m.lexicon.classes()) mu.utility[{"bb", w}] = 2.0;
  const Decision biased = classify(y, m, mu);
  REQUIRE(biased.labels.size() == 1);
  CHECK(biased.labels[0] == "bb");
  CHECK(biased.score == Approx(2.0));
}

TEST_CASE("mixture expectation step matches enumeration") {
  Rng rng(10);
  for (const Interpretation interp : {Interpretation::stochastic, Interpretation::viterbi}) {
    for (int i = 0; i < 20; ++i) {
      ClassifierModel m = make_classifier(random_transducer(kAB, kAB, rng), small_lexicon(), interp);
      const Transducer& t = m.channel.component(0);
      const SymbolString y = oracle::random_string(2, 3, rng);
      MixtureAccumulator acc(m, 0.0, 0.0);
      const double lp = mixture_expectation_step("ab", y, m, acc);
      const double z = brute_class_joint("ab", y, m);
      REQUIRE(std::exp(lp) == Approx(z).epsilon(1e-10));

      std::vector<double> edits(t.space().size(), 0.0);
      for (const std::size_t e : m.lexicon.entries_of_class(*m.lexicon.find_class("ab"))) {
        const SymbolString& x = m.lexicon.form_of(e);
        const oracle::Summary s = oracle::enumerate(x, y, t);
        const double prior = std::exp(m.lexicon.log_class_given_form(e));
        const double post = prior * (interp == Interpretation::stochastic ? s.total : s.best) / z;
        REQUIRE(acc.entries[e] == Approx(post).epsilon(1e-10));
        if (interp == Interpretation::stochastic) {
          for (std::size_t k = 0; k < edits.size(); ++k) edits[k] += post * s.counts[k];
        } else {
          EditAccumulator best(t.space());
          viterbi_expectation_step(x, y, t, best, post);
          for (std::size_t k = 0; k < edits.size(); ++k) edits[k] += best.gamma[k];
        }
      }
      for (std::size_t k = 0; k < edits.size(); ++k) REQUIRE(acc.edits.gamma[k] == Approx(edits[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("unknown classes are skipped") {
  const ClassifierModel m = make_classifier(Transducer::uniform(kAB, kAB), small_lexicon());
  MixtureAccumulator acc(m, 0.0, 0.0);
  CHECK(mixture_expectation_step("missing", kAB.encode("a"), m, acc) == kLogZero);
  CHECK(acc.skipped == 1);
}

TEST_CASE("adapt switches hold their factor fixed") {
  Rng rng(14);
  ClassifierModel base = make_classifier(random_transducer(kAB, kAB, rng), small_lexicon());
  base.lexicon.set_probabilities({0.1, 0.3, 0.2, 0.25, 0.15});
  const LabeledCorpus corpus = random_labeled(base.lexicon, base.channel.component(0), 40, rng);

  auto word_probs = [](const Lexicon& lex) {
    std::vector<double> p(lex.classes().size(), 0.0);
    for (const auto& e : lex.entries()) p[e.cls] += e.prob();
    return p;
  };
  for (const bool adapt_word : {false, true}) {
    for (const bool adapt_entry : {false, true}) {
      ClassifierModel m = base;
      m.adapt_word = adapt_word;
      m.adapt_entry = adapt_entry;
      MixtureAccumulator acc(m, 0.0, 0.1);
      corpus_mixture_expectation(m, corpus, 1, acc);
      const ClassifierModel next = mixture_maximization_step(m, acc);
      CHECK(next.lexicon.total() == Approx(1.0).epsilon(1e-12));
      const auto before = word_probs(m.lexicon), after = word_probs(next.lexicon);
      for (std::size_t c = 0; c < before.size(); ++c) {
        if (!adapt_word) CHECK(std::abs(after[c] - before[c]) <= 1e-12);
        for (const std::size_t e : m.lexicon.entries_of_class(c)) {
          const double cond_before = m.lexicon.entry(e).prob() / before[c];
          const double cond_after = next.lexicon.entry(e).prob() / after[c];
          if (!adapt_entry) CHECK(std::abs(cond_after - cond_before) <= 1e-12);
        }
      }
      if (adapt_word && adapt_entry) {
        const double n = std::accumulate(acc.entries.begin(), acc.entries.end(), 0.0);
        for (std::size_t e = 0; e < m.lexicon.size(); ++e)
          CHECK(next.lexicon.entry(e).prob() == Approx(acc.entries[e] / n).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("classifier training is monotone") {
  Rng rng(15);
  const ClassifierModel truth = make_classifier(random_transducer(kAB, kAB, rng), small_lexicon());
  const LabeledCorpus corpus = random_labeled(truth.lexicon, truth.channel.component(0), 60, rng);
  for (const Interpretation interp : {Interpretation::stochastic, Interpretation::viterbi}) {
    ClassifierTrainOptions opts;
    opts.threshold = 0.0;
    opts.max_iterations = 8;
    const ClassifierTrainResult r =
        train_classifier(make_classifier(Transducer::uniform(kAB, kAB), small_lexicon(), interp), corpus, opts);
    CHECK(r.log_likelihood.size() == 9);
    for (std::size_t k = 1; k < r.log_likelihood.size(); ++k)
      CHECK(r.log_likelihood[k] >= r.log_likelihood[k - 1] - 1e-9 * std::abs(r.log_likelihood[k - 1]));
    CHECK(validate(r.model.channel.component(0)).valid_string_pair_model());
    CHECK(r.model.lexicon.total() == Approx(1.0));
  }
}

TEST_CASE("classifier training errors") {
  const ClassifierModel m = make_classifier(Transducer::uniform(kAB, kAB), small_lexicon());
  CHECK_THROWS_AS(train_classifier(m, LabeledCorpus{}, {}), TrainingError);
  CHECK_THROWS_AS(train_classifier(m, LabeledCorpus{{{"nobody", kAB.encode("a")}}}, {}), TrainingError);
  ClassifierModel two = m;
  two.channel = tied_untied_mixture(Transducer::uniform(kAB, kAB), Transducer::uniform(kAB, kAB));
  CHECK_THROWS_AS(train_classifier(two, LabeledCorpus{{{"ab", kAB.encode("a")}}}, {}), ConfigError);
  ClassifierModel empty = m;
  empty.lexicon = Lexicon(kAB);
  CHECK_THROWS_AS(check_model(empty), ConfigError);
}

TEST_CASE("add_word") {
  const ClassifierModel m = make_classifier(Transducer::uniform(kAB, kAB), small_lexicon());
  const ClassifierModel n = add_word(m, "new", kAB.encode("a a"), 0.2);
  REQUIRE(n.lexicon.size() == m.lexicon.size() + 1);
  CHECK(n.lexicon.entry(*n.lexicon.find_entry("new", kAB.encode("a a"))).prob() == Approx(0.2));
  for (std::size_t e = 0; e < m.lexicon.size(); ++e) {
    const auto& old = m.lexicon.entry(e);
    const auto idx = n.lexicon.find_entry(m.lexicon.class_name(old.cls), m.lexicon.form_of(e));
    REQUIRE(idx.has_value());
    CHECK(n.lexicon.entry(*idx).prob() == Approx(0.8 * old.prob()));
  }
  CHECK(n.channel.component(0).log_probabilities()[0] == m.channel.component(0).log_probabilities()[0]);
  ClassifierModel biased = n;
  biased.channel = uniform_mixture({copy_biased()});
  CHECK(classify(kAB.encode("a a"), biased).labels == std::vector<std::string>{"new"});

  // An existing entry gains the new mass on top of its scaled weight.
  const ClassifierModel merged = add_word(m, "bb", kAB.encode("b b"), 0.5);
  CHECK(merged.lexicon.size() == m.lexicon.size());
  CHECK(merged.lexicon.entry(*merged.lexicon.find_entry("bb", kAB.encode("b b"))).prob() ==
        Approx(0.5 + 0.5 * 0.25));
  CHECK_THROWS_AS(add_word(m, "x", kAB.encode("a"), 1.0), ConfigError);
}

TEST_CASE("lexicon from a corpus") {
  const LabeledCorpus c{{{"x", kAB.encode("a")}, {"x", kAB.encode("a")}, {"y", kAB.encode("b")}}};
  const Lexicon lex = build_lexicon_from_corpus(c, kAB, 1.0);
  REQUIRE(lex.size() == 2);
  CHECK(lex.entry(*lex.find_entry("x", kAB.encode("a"))).prob() == Approx(3.0 / 5));
  CHECK(lex.entry(*lex.find_entry("y", kAB.encode("b"))).prob() == Approx(2.0 / 5));
}

TEST_CASE("nearest neighbor agrees with classification on distinct forms") {
  Rng rng(16);
  Lexicon lex(kAB);
  lex.add("p", kAB.encode("a b"), 1.0);
  lex.add("q", kAB.encode("b b a"), 1.0);
  lex.add("r", kAB.encode("a"), 1.0);
  lex.normalize();
  for (int i = 0; i < 20; ++i) {
    const Transducer t = random_transducer(kAB, kAB, rng);
    const ClassifierModel m = make_classifier(t, lex);
    const ClassifierModel mv = make_classifier(t, lex, Interpretation::viterbi);
    for (int j = 0; j < 10; ++j) {
      const SymbolString y = oracle::random_string(2, 4, rng);
      CHECK(nearest_neighbor_classify(y, lex, stochastic_distance_fn(t)).labels == classify(y, m).labels);
      CHECK(nearest_neighbor_classify(y, lex, viterbi_distance_fn(t)).labels == classify(y, mv).labels);
    }
  }
  const Decision d = nearest_neighbor_classify(kAB.encode("a b b"), lex, levenshtein_distance_fn(kAB, kAB));
  CHECK(d.labels == std::vector<std::string>{"p"});
  CHECK(d.score == 1.0);
}

TEST_CASE("ad hoc pairs pair every prototype with each sample") {
  const Lexicon lex = small_lexicon();
  const LabeledCorpus c{{{"ab", kAB.encode("a")}, {"bb", kAB.encode("b")}, {"missing", kAB.encode("a")}}};
  const PairCorpus pairs = adhoc_pairs(c, lex);
  CHECK(pairs.size() == 3);
  CHECK(pairs.pairs[0].first == kAB.encode("a b"));
  CHECK(pairs.pairs[1].first == kAB.encode("a b b"));
  CHECK(pairs.pairs[2] == std::make_pair(kAB.encode("b b"), kAB.encode("b")));
}
