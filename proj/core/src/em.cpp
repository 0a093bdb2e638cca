#include "stochedit/em.hpp"

#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "stochedit/errors.hpp"
#include "stochedit/evaluate.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit {

double EditAccumulator::total() const { return std::accumulate(gamma.begin(), gamma.end(), 0.0); }

EditAccumulator& EditAccumulator::operator+=(const EditAccumulator& other) {
  if (gamma.size() != other.gamma.size()) throw ConfigError("accumulator size mismatch");
  for (std::size_t i = 0; i < gamma.size(); ++i) gamma[i] += other.gamma[i];
  skipped += other.skipped;
  return *this;
}

TyingScheme::TyingScheme(const EditSpace& space, std::vector<std::size_t> class_of)
    : space_(space), class_of_(std::move(class_of)) {
  if (class_of_.size() != space_.num_edits()) throw ConfigError("tying scheme must assign every edit operation");
  std::size_t n = 0;
  for (std::size_t c : class_of_) n = std::max(n, c + 1);
  sizes_.assign(n, 0);
  for (std::size_t c : class_of_) ++sizes_[c];
  for (std::size_t s : sizes_) {
    if (s == 0) throw ConfigError("tying scheme has an empty class");
  }
}

TyingScheme TyingScheme::from_assignments(const EditSpace& space,
                                          const std::vector<std::pair<EditOp, std::size_t>>& assignments) {
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> class_of(space.num_edits(), kUnassigned);
  for (const auto& [op, cls] : assignments) {
    if (op.kind == OpKind::termination) throw ConfigError("termination cannot be tied");
    std::size_t& slot = class_of[space.index(op)];
    if (slot != kUnassigned) throw ConfigError("edit operation assigned twice in tying scheme");
    slot = cls;
  }
  for (std::size_t c : class_of) {
    if (c == kUnassigned) throw ConfigError("tying scheme does not partition E");
  }
  return TyingScheme(space, std::move(class_of));
}

TyingScheme TyingScheme::four_class(const Alphabet& source, const Alphabet& target) {
  const EditSpace space(source.size(), target.size());
  enum { kIdentity, kSubstitute, kInsert, kDelete };
  std::vector<std::size_t> raw(space.num_edits());
  for (Symbol a = 0; a < source.size(); ++a) {
    for (Symbol b = 0; b < target.size(); ++b) {
      raw[space.sub_index(a, b)] = source.symbol(a) == target.symbol(b) ? kIdentity : kSubstitute;
    }
    raw[space.del_index(a)] = kDelete;
  }
  for (Symbol b = 0; b < target.size(); ++b) raw[space.ins_index(b)] = kInsert;
  // Compact away classes with no members (e.g. disjoint alphabets).
  std::vector<std::size_t> remap(4, static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t& c : raw) {
    if (remap[c] == static_cast<std::size_t>(-1)) remap[c] = next++;
    c = remap[c];
  }
  return TyingScheme(space, std::move(raw));
}

TyingScheme TyingScheme::singletons(const EditSpace& space) {
  std::vector<std::size_t> ids(space.num_edits());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  return TyingScheme(space, std::move(ids));
}

double expectation_step(const SymbolString& x, const SymbolString& y, const Transducer& t,
                        const LogMatrix& alpha, const LogMatrix& beta, EditAccumulator& acc, double lambda) {
  const std::size_t T = x.size(), V = y.size();
  const double logp = alpha(T, V);
  if (logp == kLogZero) {
    ++acc.skipped;
    return kLogZero;
  }
  if (lambda == 0.0) return logp;
  const EditSpace& space = t.space();
  acc.gamma[space.end_index()] += lambda;
  for (std::size_t i = 0; i <= T; ++i) {
    for (std::size_t j = 0; j <= V; ++j) {
      const double b = beta(i, j);
      if (b == kLogZero) continue;
      if (i > 0) {
        const double lp = alpha(i - 1, j) + t.log_del(x[i - 1]) + b - logp;
        if (lp != kLogZero) acc.gamma[space.del_index(x[i - 1])] += lambda * std::exp(lp);
      }
      if (j > 0) {
        const double lp = alpha(i, j - 1) + t.log_ins(y[j - 1]) + b - logp;
        if (lp != kLogZero) acc.gamma[space.ins_index(y[j - 1])] += lambda * std::exp(lp);
      }
      if (i > 0 && j > 0) {
        const double lp = alpha(i - 1, j - 1) + t.log_sub(x[i - 1], y[j - 1]) + b - logp;
        if (lp != kLogZero) acc.gamma[space.sub_index(x[i - 1], y[j - 1])] += lambda * std::exp(lp);
      }
    }
  }
  return logp;
}

double expectation_step(const SymbolString& x, const SymbolString& y, const Transducer& t, EditAccumulator& acc,
                        double lambda) {
  const LogMatrix alpha = forward_evaluate(x, y, t);
  if (alpha(x.size(), y.size()) == kLogZero) {
    ++acc.skipped;
    return kLogZero;
  }
  const LogMatrix beta = backward_evaluate(x, y, t);
  return expectation_step(x, y, t, alpha, beta, acc, lambda);
}

double viterbi_expectation_step(const SymbolString& x, const SymbolString& y, const Transducer& t,
                                EditAccumulator& acc, double lambda) {
  const ViterbiResult best = viterbi_distance(x, y, t);
  if (best.bits == kInfinity) {
    ++acc.skipped;
    return kLogZero;
  }
  for (const EditOp& op : best.alignment.ops) acc.gamma[t.space().index(op)] += lambda;
  return -best.bits * std::numbers::ln2;
}

Transducer maximization_step(const Transducer& t, const EditAccumulator& acc) {
  if (acc.gamma.size() != t.space().size()) throw ConfigError("accumulator does not match transducer");
  const double n = acc.total();
  if (!(n > 0.0)) throw TrainingError("maximization step with no expected counts");
  const double log_n = std::log(n);
  std::vector<double> logs(acc.gamma.size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = safe_log(acc.gamma[i]) - log_n;
  return Transducer::from_log_probabilities(t.source(), t.target(), std::move(logs));
}

Transducer apply_tying(const Transducer& t, const TyingScheme& scheme) {
  if (!(scheme.space() == t.space())) throw ConfigError("tying scheme does not match transducer alphabets");
  const std::vector<double> probs = t.probabilities();
  std::vector<double> totals(scheme.num_classes(), 0.0);
  const std::size_t edits = t.space().num_edits();
  for (std::size_t i = 0; i < edits; ++i) totals[scheme.class_of(i)] += probs[i];
  std::vector<double> logs(t.log_probabilities().begin(), t.log_probabilities().end());
  for (std::size_t i = 0; i < edits; ++i) {
    const std::size_t c = scheme.class_of(i);
    logs[i] = safe_log(totals[c]) - std::log(static_cast<double>(scheme.class_size(c)));
  }
  return Transducer::from_log_probabilities(t.source(), t.target(), std::move(logs));
}

double corpus_expectation(const Transducer& t, const PairCorpus& corpus, ExpectationMode mode, unsigned threads,
                          EditAccumulator& acc) {
  const std::size_t chunks = detail::chunk_count(corpus.size(), threads);
  std::vector<EditAccumulator> partial(chunks, EditAccumulator(t.space(), 0.0));
  std::vector<double> ll(chunks, 0.0);
  detail::parallel_chunks(corpus.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto& [x, y] = corpus.pairs[k];
      const double lp = mode == ExpectationMode::full ? expectation_step(x, y, t, partial[c], 1.0)
                                                      : viterbi_expectation_step(x, y, t, partial[c], 1.0);
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

double corpus_log_likelihood(const Transducer& t, const PairCorpus& corpus, ExpectationMode mode, unsigned threads) {
  const std::size_t chunks = detail::chunk_count(corpus.size(), threads);
  std::vector<double> ll(chunks, 0.0);
  detail::parallel_chunks(corpus.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto& [x, y] = corpus.pairs[k];
      const double lp = mode == ExpectationMode::full ? log_joint_probability(x, y, t)
                                                      : viterbi_log_probability(x, y, t);
      if (lp != kLogZero) ll[c] += lp;
    }
  });
  return std::accumulate(ll.begin(), ll.end(), 0.0);
}

bool has_converged(double previous, double current, double threshold) {
  return std::abs(current - previous) <= threshold * std::abs(previous);
}

}  // namespace

TrainResult train(const Transducer& initial, const PairCorpus& corpus, const TrainOptions& options) {
  if (corpus.empty()) throw TrainingError("empty training corpus");
  if (options.threshold < 0.0 || options.smoothing < 0.0) throw ConfigError("threshold and smoothing must be >= 0");
  TrainResult r;
  r.model = initial;
  for (int it = 0; it < options.max_iterations; ++it) {
    EditAccumulator acc(r.model.space(), options.smoothing);
    const double ll = corpus_expectation(r.model, corpus, options.mode, options.threads, acc);
    r.skipped = acc.skipped;
    if (acc.skipped == corpus.size()) throw TrainingError("every training pair has zero probability");
    r.log_likelihood.push_back(ll);
    const std::size_t n = r.log_likelihood.size();
    if (n >= 2 && has_converged(r.log_likelihood[n - 2], ll, options.threshold)) {
      r.converged = true;
      return r;
    }
    r.model = maximization_step(r.model, acc);
    if (options.tying) r.model = apply_tying(r.model, *options.tying);
    ++r.iterations;
  }
  r.log_likelihood.push_back(corpus_log_likelihood(r.model, corpus, options.mode, options.threads));
  const std::size_t n = r.log_likelihood.size();
  r.converged = n >= 2 && has_converged(r.log_likelihood[n - 2], r.log_likelihood[n - 1], options.threshold);
  return r;
}

}  // namespace stochedit
