#include "stochedit/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "stochedit/classic.hpp"
#include "stochedit/errors.hpp"
#include "stochedit/evaluate.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit {

namespace {

double channel_log_prob(const SymbolString& x, const SymbolString& y, const MixtureTransducer& channel,
                        Interpretation interpretation) {
  double total = kLogZero;
  for (std::size_t i = 0; i < channel.size(); ++i) {
    if (channel.weight(i) == 0.0) continue;
    const Transducer& t = channel.component(i);
    const double lp = interpretation == Interpretation::stochastic ? log_joint_probability(x, y, t)
                                                                   : viterbi_log_probability(x, y, t);
    total = log_add(total, channel.log_weight(i) + lp);
  }
  return total;
}

bool within(double value, double best, double tolerance) {
  return std::abs(value - best) <= tolerance * std::max(1.0, std::abs(best));
}

// ln p(w, y) for one class, summing only over that class's prototypes.
double class_sample_log_joint(std::size_t cls, const SymbolString& y, const ClassifierModel& m) {
  double total = kLogZero;
  for (std::size_t e : m.lexicon.entries_of_class(cls)) {
    const double prior = m.lexicon.log_class_given_form(e);
    if (prior == kLogZero) continue;
    total = log_add(total, prior + channel_log_prob(m.lexicon.form_of(e), y, m.channel, m.interpretation));
  }
  return total;
}

}  // namespace

void check_model(const ClassifierModel& m) {
  if (m.lexicon.empty()) throw ConfigError("classifier lexicon is empty");
  if (m.channel.size() == 0) throw ConfigError("classifier has no transducer");
  if (!(m.channel.source() == m.lexicon.alphabet()))
    throw ConfigError("lexicon alphabet differs from the transducer source alphabet");
}

ClassifierModel make_classifier(Transducer channel, Lexicon lexicon, Interpretation interpretation) {
  ClassifierModel m;
  m.channel = uniform_mixture({std::move(channel)});
  m.lexicon = std::move(lexicon);
  m.lexicon.set_uniform_hierarchy();
  m.interpretation = interpretation;
  check_model(m);
  return m;
}

double UtilityFunction::operator()(const std::string& decided, const std::string& truth) const {
  auto it = utility.find({decided, truth});
  return it == utility.end() ? 0.0 : it->second;
}

UtilityFunction UtilityFunction::identity(const std::vector<std::string>& classes) {
  UtilityFunction u;
  for (const auto& c : classes) u.utility[{c, c}] = 1.0;
  return u;
}

std::vector<double> class_log_joint(const SymbolString& y, const ClassifierModel& m) {
  check_model(m);
  m.channel.target().check(y, "observed string");
  const Lexicon& lex = m.lexicon;
  std::vector<double> out(lex.classes().size(), kLogZero);
  for (std::size_t f = 0; f < lex.forms().size(); ++f) {
    const auto& entries = lex.entries_of_form(f);
    if (entries.empty()) continue;
    const double lp = channel_log_prob(lex.forms()[f], y, m.channel, m.interpretation);
    if (lp == kLogZero) continue;
    const double form_lp = lex.form_log_prob(f);
    if (form_lp == kLogZero) continue;
    for (std::size_t e : entries) {
      const LexiconEntry& entry = lex.entry(e);
      out[entry.cls] = log_add(out[entry.cls], entry.log_prob - form_lp + lp);
    }
  }
  return out;
}

std::vector<double> class_posteriors(const SymbolString& y, const ClassifierModel& m) {
  std::vector<double> lj = class_log_joint(y, m);
  double z = kLogZero;
  for (double v : lj) z = log_add(z, v);
  std::vector<double> post(lj.size(), 0.0);
  if (z == kLogZero) return post;
  for (std::size_t i = 0; i < lj.size(); ++i) post[i] = std::exp(lj[i] - z);
  return post;
}

Decision classify(const SymbolString& y, const ClassifierModel& m, double tie_tolerance) {
  const std::vector<double> lj = class_log_joint(y, m);
  double best = kLogZero, z = kLogZero;
  for (double v : lj) {
    best = std::max(best, v);
    z = log_add(z, v);
  }
  Decision d;
  if (best == kLogZero) return d;
  for (std::size_t c = 0; c < lj.size(); ++c) {
    if (lj[c] != kLogZero && within(lj[c], best, tie_tolerance)) d.labels.push_back(m.lexicon.class_name(c));
  }
  d.score = std::exp(best - z);
  return d;
}

Decision classify(const SymbolString& y, const ClassifierModel& m, const UtilityFunction& mu, double tie_tolerance) {
  const std::vector<double> post = class_posteriors(y, m);
  Decision d;
  if (std::all_of(post.begin(), post.end(), [](double p) { return p == 0.0; })) return d;
  const auto& classes = m.lexicon.classes();
  std::vector<double> expected(classes.size(), 0.0);
  for (std::size_t u = 0; u < classes.size(); ++u) {
    for (std::size_t w = 0; w < classes.size(); ++w) {
      if (post[w] > 0.0) expected[u] += mu(classes[u], classes[w]) * post[w];
    }
  }
  const double best = *std::max_element(expected.begin(), expected.end());
  for (std::size_t u = 0; u < classes.size(); ++u) {
    if (within(expected[u], best, tie_tolerance)) d.labels.push_back(classes[u]);
  }
  d.score = best;
  return d;
}

MixtureAccumulator::MixtureAccumulator(const ClassifierModel& m, double transducer_smoothing,
                                       double lexicon_smoothing)
    : edits(m.channel.component(0).space(), transducer_smoothing), entries(m.lexicon.size(), lexicon_smoothing) {}

MixtureAccumulator& MixtureAccumulator::operator+=(const MixtureAccumulator& other) {
  edits += other.edits;
  if (entries.size() != other.entries.size()) throw ConfigError("lexicon accumulator size mismatch");
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i] += other.entries[i];
  skipped += other.skipped;
  return *this;
}

double mixture_expectation_step(const std::string& w, const SymbolString& y, const ClassifierModel& m,
                                MixtureAccumulator& acc) {
  if (m.channel.size() != 1) throw ConfigError("mixture EM trains a single transducer");
  const Transducer& t = m.channel.component(0);
  t.target().check(y, "observed string");
  const auto cls = m.lexicon.find_class(w);
  if (!cls) {
    ++acc.skipped;
    return kLogZero;
  }
  const auto& members = m.lexicon.entries_of_class(*cls);
  const bool stochastic = m.interpretation == Interpretation::stochastic;

  std::vector<double> log_alpha(members.size(), kLogZero);
  std::vector<LogMatrix> lattices(stochastic ? members.size() : 0);
  double z = kLogZero;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::size_t e = members[k];
    const double prior = m.lexicon.log_class_given_form(e);
    if (prior == kLogZero) continue;
    const SymbolString& x = m.lexicon.form_of(e);
    double lp;
    if (stochastic) {
      lattices[k] = forward_evaluate(x, y, t);
      lp = lattices[k](x.size(), y.size());
    } else {
      lp = viterbi_log_probability(x, y, t);
    }
    log_alpha[k] = prior + lp;
    z = log_add(z, log_alpha[k]);
  }
  if (z == kLogZero) {
    ++acc.skipped;
    return kLogZero;
  }
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (log_alpha[k] == kLogZero) continue;
    const double posterior = std::exp(log_alpha[k] - z);
    acc.entries[members[k]] += posterior;
    if (posterior == 0.0) continue;
    const SymbolString& x = m.lexicon.form_of(members[k]);
    if (stochastic) {
      expectation_step(x, y, t, lattices[k], backward_evaluate(x, y, t), acc.edits, posterior);
    } else {
      viterbi_expectation_step(x, y, t, acc.edits, posterior);
    }
  }
  return z;
}

ClassifierModel mixture_maximization_step(const ClassifierModel& m, const MixtureAccumulator& acc,
                                          const std::optional<TyingScheme>& tying) {
  if (m.channel.size() != 1) throw ConfigError("mixture EM trains a single transducer");
  const Lexicon& lex = m.lexicon;
  if (acc.entries.size() != lex.size()) throw ConfigError("lexicon accumulator size mismatch");
  const double n = std::accumulate(acc.entries.begin(), acc.entries.end(), 0.0);
  if (!(n > 0.0)) throw TrainingError("lexicon maximization step with no expected counts");

  const std::size_t num_classes = lex.classes().size();
  std::vector<double> fresh(lex.size());
  for (std::size_t e = 0; e < lex.size(); ++e) fresh[e] = safe_log(acc.entries[e]) - std::log(n);

  std::vector<double> updated = fresh;
  if (!m.adapt_word || !m.adapt_entry) {
    // Split both the old and new joints into word and entry-given-word parts
    // and recombine the parts whose switch is on.
    std::vector<double> old_word(num_classes, kLogZero), new_word(num_classes, kLogZero);
    for (std::size_t e = 0; e < lex.size(); ++e) {
      const std::size_t c = lex.entry(e).cls;
      old_word[c] = log_add(old_word[c], lex.entry(e).log_prob);
      new_word[c] = log_add(new_word[c], fresh[e]);
    }
    for (std::size_t e = 0; e < lex.size(); ++e) {
      const std::size_t c = lex.entry(e).cls;
      const double old_cond = old_word[c] == kLogZero ? kLogZero : lex.entry(e).log_prob - old_word[c];
      const double new_cond = new_word[c] == kLogZero ? old_cond : fresh[e] - new_word[c];
      const double word = m.adapt_word ? new_word[c] : old_word[c];
      const double cond = m.adapt_entry ? new_cond : old_cond;
      updated[e] = (word == kLogZero || cond == kLogZero) ? kLogZero : word + cond;
    }
  }

  ClassifierModel out = m;
  out.lexicon.set_log_probabilities(updated);
  Transducer t = maximization_step(m.channel.component(0), acc.edits);
  if (tying) t = apply_tying(t, *tying);
  out.channel = uniform_mixture({std::move(t)});
  return out;
}

double corpus_mixture_expectation(const ClassifierModel& m, const LabeledCorpus& corpus, unsigned threads,
                                  MixtureAccumulator& acc) {
  const std::size_t chunks = detail::chunk_count(corpus.size(), threads);
  MixtureAccumulator zero = acc;
  std::fill(zero.edits.gamma.begin(), zero.edits.gamma.end(), 0.0);
  std::fill(zero.entries.begin(), zero.entries.end(), 0.0);
  zero.edits.skipped = zero.skipped = 0;
  std::vector<MixtureAccumulator> partial(chunks, zero);
  std::vector<double> ll(chunks, 0.0);
  detail::parallel_chunks(corpus.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto& s = corpus.samples[k];
      const double lp = mixture_expectation_step(s.cls, s.y, m, partial[c]);
      if (lp != kLogZero) ll[c] += lp;
    }
  });
  double total = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    acc += partial[c];
    total += ll[c];
  }
  return total;
}

namespace {

double corpus_joint_log_likelihood(const ClassifierModel& m, const LabeledCorpus& corpus, unsigned threads) {
  const std::size_t chunks = detail::chunk_count(corpus.size(), threads);
  std::vector<double> ll(chunks, 0.0);
  detail::parallel_chunks(corpus.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto& s = corpus.samples[k];
      const auto cls = m.lexicon.find_class(s.cls);
      if (!cls) continue;
      const double lp = class_sample_log_joint(*cls, s.y, m);
      if (lp != kLogZero) ll[c] += lp;
    }
  });
  return std::accumulate(ll.begin(), ll.end(), 0.0);
}

bool has_converged(double previous, double current, double threshold) {
  return std::abs(current - previous) <= threshold * std::abs(previous);
}

}  // namespace

ClassifierTrainResult train_classifier(const ClassifierModel& m, const LabeledCorpus& corpus,
                                       const ClassifierTrainOptions& options) {
  check_model(m);
  if (m.channel.size() != 1) throw ConfigError("mixture EM trains a single transducer");
  if (corpus.empty()) throw TrainingError("empty training corpus");
  if (options.threshold < 0.0 || options.transducer_smoothing < 0.0 || options.lexicon_smoothing < 0.0)
    throw ConfigError("threshold and smoothing must be >= 0");

  ClassifierTrainResult r;
  r.model = m;
  for (int it = 0; it < options.max_iterations; ++it) {
    MixtureAccumulator acc(r.model, options.transducer_smoothing, options.lexicon_smoothing);
    const double ll = corpus_mixture_expectation(r.model, corpus, options.threads, acc);
    r.skipped = acc.skipped;
    if (acc.skipped == corpus.size()) throw TrainingError("every training sample has zero probability");
    r.log_likelihood.push_back(ll);
    const std::size_t n = r.log_likelihood.size();
    if (n >= 2 && has_converged(r.log_likelihood[n - 2], ll, options.threshold)) {
      r.converged = true;
      return r;
    }
    r.model = mixture_maximization_step(r.model, acc, options.tying);
    ++r.iterations;
  }
  r.log_likelihood.push_back(corpus_joint_log_likelihood(r.model, corpus, options.threads));
  const std::size_t n = r.log_likelihood.size();
  r.converged = n >= 2 && has_converged(r.log_likelihood[n - 2], r.log_likelihood[n - 1], options.threshold);
  return r;
}

Lexicon build_lexicon_from_corpus(const LabeledCorpus& corpus, const Alphabet& corpus_alphabet,
                                  const Alphabet& lexicon_alphabet, double smoothing) {
  if (corpus.empty()) throw ConfigError("cannot build a lexicon from an empty corpus");
  if (!(smoothing >= 0.0)) throw ConfigError("smoothing must be >= 0");
  const bool same = corpus_alphabet == lexicon_alphabet;
  Lexicon lex(lexicon_alphabet);
  for (const auto& s : corpus.samples) {
    const SymbolString form = same ? s.y : lexicon_alphabet.encode(corpus_alphabet.decode(s.y));
    lex.add(s.cls, form, 1.0);
  }
  if (smoothing > 0.0) {
    for (std::size_t e = 0; e < lex.size(); ++e) lex.add(lex.class_name(lex.entry(e).cls), lex.form_of(e), smoothing);
  }
  lex.normalize();
  return lex;
}

Lexicon build_lexicon_from_corpus(const LabeledCorpus& corpus, const Alphabet& alphabet, double smoothing) {
  return build_lexicon_from_corpus(corpus, alphabet, alphabet, smoothing);
}

ClassifierModel add_word(const ClassifierModel& m, const std::string& w, const SymbolString& x, double p_new) {
  if (!(p_new > 0.0 && p_new < 1.0)) throw ConfigError("new entry probability must lie in (0, 1)");
  ClassifierModel out = m;
  std::vector<double> scaled;
  scaled.reserve(out.lexicon.size());
  const double shrink = std::log1p(-p_new);
  for (const auto& e : out.lexicon.entries()) scaled.push_back(e.log_prob + shrink);
  Lexicon lex = out.lexicon;
  // Rebuild so the scaled weights and the new entry merge by addition.
  Lexicon rebuilt(lex.alphabet());
  for (std::size_t e = 0; e < lex.size(); ++e) rebuilt.add(lex.class_name(lex.entry(e).cls), lex.form_of(e), std::exp(scaled[e]));
  rebuilt.add(w, x, p_new);
  rebuilt.normalize();
  out.lexicon = std::move(rebuilt);
  return out;
}

double word_error_rate(std::span<const Decision> decisions, const LabeledCorpus& test) {
  if (test.empty()) throw ConfigError("cannot score an empty test corpus");
  if (decisions.size() != test.size()) throw ConfigError("one decision per test sample required");
  double correct = 0.0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto& labels = decisions[i].labels;
    if (labels.empty()) continue;
    const auto hits = std::count(labels.begin(), labels.end(), test.samples[i].cls);
    correct += static_cast<double>(hits) / static_cast<double>(labels.size());
  }
  return 1.0 - correct / static_cast<double>(test.size());
}

std::vector<Decision> classify_corpus(const ClassifierModel& m, const LabeledCorpus& test, unsigned threads) {
  check_model(m);
  std::vector<Decision> out(test.size());
  detail::parallel_chunks(test.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) out[k] = classify(test.samples[k].y, m);
  });
  return out;
}

StringDistance levenshtein_distance_fn(const Alphabet& source, const Alphabet& target) {
  return [c = CostFunction::levenshtein(source, target)](const SymbolString& x, const SymbolString& y) {
    return classic_edit_cost(x, y, c);
  };
}

StringDistance stochastic_distance_fn(Transducer t) {
  return [t = std::move(t)](const SymbolString& x, const SymbolString& y) { return stochastic_distance(x, y, t); };
}

StringDistance viterbi_distance_fn(Transducer t) {
  return [t = std::move(t)](const SymbolString& x, const SymbolString& y) {
    return nats_to_bits(viterbi_log_probability(x, y, t));
  };
}

StringDistance mixture_distance_fn(MixtureTransducer m, Interpretation interpretation) {
  return [m = std::move(m), interpretation](const SymbolString& x, const SymbolString& y) {
    return nats_to_bits(channel_log_prob(x, y, m, interpretation));
  };
}

Decision nearest_neighbor_classify(const SymbolString& y, const Lexicon& lexicon, const StringDistance& distance,
                                   double tie_tolerance) {
  if (lexicon.empty()) throw ConfigError("nearest-neighbor lexicon is empty");
  std::vector<double> d(lexicon.forms().size());
  double best = kInfinity;
  for (std::size_t f = 0; f < d.size(); ++f) {
    d[f] = distance(lexicon.forms()[f], y);
    best = std::min(best, d[f]);
  }
  Decision out;
  if (best == kInfinity) return out;
  for (std::size_t e = 0; e < lexicon.size(); ++e) {
    if (within(d[lexicon.entry(e).form], best, tie_tolerance)) out.labels.push_back(lexicon.class_name(lexicon.entry(e).cls));
  }
  out.score = best;
  return out;
}

std::vector<Decision> nearest_neighbor_corpus(const Lexicon& lexicon, const StringDistance& distance,
                                              const LabeledCorpus& test, unsigned threads) {
  std::vector<Decision> out(test.size());
  detail::parallel_chunks(test.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) out[k] = nearest_neighbor_classify(test.samples[k].y, lexicon, distance);
  });
  return out;
}

PairCorpus adhoc_pairs(const LabeledCorpus& corpus, const Lexicon& lexicon) {
  PairCorpus pairs;
  for (const auto& s : corpus.samples) {
    const auto cls = lexicon.find_class(s.cls);
    if (!cls) continue;
    for (std::size_t e : lexicon.entries_of_class(*cls)) pairs.pairs.emplace_back(lexicon.form_of(e), s.y);
  }
  return pairs;
}

TrainResult adhoc_train(const Transducer& t, const LabeledCorpus& corpus, const Lexicon& lexicon,
                        const TrainOptions& options) {
  return train(t, adhoc_pairs(corpus, lexicon), options);
}

}  // namespace stochedit
