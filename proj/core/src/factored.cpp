#include "stochedit/factored.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "parallel.hpp"
#include "stochedit/errors.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit {

namespace {

void check_block(std::span<const double> probs, const char* name) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0 + FactoredTransducer::kNormalizationTolerance))
      throw ConfigError(std::string(name) + " has an entry outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > FactoredTransducer::kNormalizationTolerance)
    throw ConfigError(std::string(name) + " does not sum to one");
}

std::vector<double> logs_of(const std::vector<double>& probs) {
  std::vector<double> out(probs.size());
  std::transform(probs.begin(), probs.end(), out.begin(), safe_log);
  return out;
}

std::vector<double> exps_of(const std::vector<double>& logs) {
  std::vector<double> out(logs.size());
  std::transform(logs.begin(), logs.end(), out.begin(), [](double l) { return std::exp(l); });
  return out;
}

std::size_t draw(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;  // rounding left u just above the cumulative total
}

// Log-probabilities of the three moves out of state <t, v>, conditioned on
// the lengths. Interior states weigh each move by omega; on the last row or
// column the only legal move is forced and drawn from its observation
// distribution alone.
struct Moves {
  double del = kLogZero;
  double ins = kLogZero;
  double sub = kLogZero;
  bool interior = false;
};

Moves moves_from(std::size_t t, std::size_t v, const SymbolString& x, const SymbolString& y,
                 const FactoredTransducer& f) {
  const std::size_t T = x.size(), V = y.size();
  Moves m;
  if (t < T && v < V) {
    m.interior = true;
    m.del = f.log_omega_del() + f.log_del(x[t]);
    m.ins = f.log_omega_ins() + f.log_ins(y[v]);
    m.sub = f.log_omega_sub() + f.log_sub(x[t], y[v]);
  } else if (t < T) {
    m.del = f.log_del(x[t]);
  } else if (v < V) {
    m.ins = f.log_ins(y[v]);
  }
  return m;
}

void check_strings(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f) {
  f.source().check(x, "source string");
  f.target().check(y, "target string");
}

}  // namespace

FactoredTransducer::FactoredTransducer(Alphabet source, Alphabet target, Omega omega, std::vector<double> del,
                                       std::vector<double> ins, std::vector<double> sub)
    : source_(std::move(source)), target_(std::move(target)) {
  log_omega_[0] = safe_log(omega.del);
  log_omega_[1] = safe_log(omega.ins);
  log_omega_[2] = safe_log(omega.sub);
  log_del_ = logs_of(del);
  log_ins_ = logs_of(ins);
  log_sub_ = logs_of(sub);
  for (double p : {omega.del, omega.ins, omega.sub}) {
    if (std::isnan(p) || p < 0.0) throw ConfigError("omega entries must be nonnegative");
  }
  finish();
}

FactoredTransducer FactoredTransducer::from_log_probabilities(Alphabet source, Alphabet target, Omega log_omega,
                                                              std::vector<double> log_del,
                                                              std::vector<double> log_ins,
                                                              std::vector<double> log_sub) {
  FactoredTransducer f;
  f.source_ = std::move(source);
  f.target_ = std::move(target);
  f.log_omega_[0] = log_omega.del;
  f.log_omega_[1] = log_omega.ins;
  f.log_omega_[2] = log_omega.sub;
  f.log_del_ = std::move(log_del);
  f.log_ins_ = std::move(log_ins);
  f.log_sub_ = std::move(log_sub);
  f.finish();
  return f;
}

FactoredTransducer FactoredTransducer::uniform(Alphabet source, Alphabet target) {
  const std::size_t na = source.size(), nb = target.size();
  if (na == 0 || nb == 0) throw ConfigError("transducer alphabets must be non-empty");
  return FactoredTransducer(std::move(source), std::move(target), Omega{1.0 / 3, 1.0 / 3, 1.0 / 3},
                            std::vector<double>(na, 1.0 / static_cast<double>(na)),
                            std::vector<double>(nb, 1.0 / static_cast<double>(nb)),
                            std::vector<double>(na * nb, 1.0 / static_cast<double>(na * nb)));
}

void FactoredTransducer::finish() {
  if (source_.empty() || target_.empty()) throw ConfigError("transducer alphabets must be non-empty");
  if (log_del_.size() != source_.size()) throw ConfigError("deletion distribution has the wrong size");
  if (log_ins_.size() != target_.size()) throw ConfigError("insertion distribution has the wrong size");
  if (log_sub_.size() != source_.size() * target_.size())
    throw ConfigError("substitution distribution has the wrong size");
  for (const auto* block : {&log_del_, &log_ins_, &log_sub_}) {
    for (double l : *block) {
      if (std::isnan(l)) throw ConfigError("NaN log-probability");
    }
  }
  for (double l : log_omega_) {
    if (std::isnan(l)) throw ConfigError("NaN log-probability");
  }
  omega_ = Omega{std::exp(log_omega_[0]), std::exp(log_omega_[1]), std::exp(log_omega_[2])};
  del_ = exps_of(log_del_);
  ins_ = exps_of(log_ins_);
  sub_ = exps_of(log_sub_);
  const double w[3] = {omega_.del, omega_.ins, omega_.sub};
  check_block(w, "omega");
  check_block(del_, "deletion distribution");
  check_block(ins_, "insertion distribution");
  check_block(sub_, "substitution distribution");
}

FactoredTransducer factor(const Transducer& t) {
  const std::size_t na = t.source().size(), nb = t.target().size();
  std::vector<double> ld(na), li(nb), ls(na * nb);
  double td = kLogZero, ti = kLogZero, ts = kLogZero;
  for (Symbol a = 0; a < na; ++a) {
    ld[a] = t.log_del(a);
    td = log_add(td, ld[a]);
    for (Symbol b = 0; b < nb; ++b) {
      ls[a * nb + b] = t.log_sub(a, b);
      ts = log_add(ts, ls[a * nb + b]);
    }
  }
  for (Symbol b = 0; b < nb; ++b) {
    li[b] = t.log_ins(b);
    ti = log_add(ti, li[b]);
  }
  if (td == kLogZero || ti == kLogZero || ts == kLogZero)
    throw ConfigError("cannot factor a transducer with no deletion, insertion, or substitution mass");
  const double edits = log_add(td, ti, ts);
  for (double& l : ld) l -= td;
  for (double& l : li) l -= ti;
  for (double& l : ls) l -= ts;
  return FactoredTransducer::from_log_probabilities(t.source(), t.target(),
                                                    {td - edits, ti - edits, ts - edits}, std::move(ld),
                                                    std::move(li), std::move(ls));
}

Transducer unfactor(const FactoredTransducer& f) {
  const EditSpace space(f.source().size(), f.target().size());
  std::vector<double> logs(space.size(), kLogZero);
  for (Symbol a = 0; a < f.source().size(); ++a) {
    logs[space.del_index(a)] = f.log_omega_del() + f.log_del(a);
    for (Symbol b = 0; b < f.target().size(); ++b)
      logs[space.sub_index(a, b)] = f.log_omega_sub() + f.log_sub(a, b);
  }
  for (Symbol b = 0; b < f.target().size(); ++b) logs[space.ins_index(b)] = f.log_omega_ins() + f.log_ins(b);
  return Transducer::from_log_probabilities(f.source(), f.target(), std::move(logs));
}

LengthPrior::LengthPrior(std::map<std::pair<std::size_t, std::size_t>, double> table) : table_(std::move(table)) {
  double sum = 0.0;
  for (const auto& [k, p] : table_) {
    if (!(p >= 0.0)) throw ConfigError("length prior entries must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("length prior does not sum to one");
}

LengthPrior LengthPrior::from_corpus(const PairCorpus& corpus) {
  if (corpus.empty()) throw ConfigError("cannot estimate a length prior from an empty corpus");
  std::map<std::pair<std::size_t, std::size_t>, double> counts;
  for (const auto& [x, y] : corpus.pairs) counts[{x.size(), y.size()}] += 1.0;
  for (auto& [k, c] : counts) c /= static_cast<double>(corpus.size());
  return LengthPrior(std::move(counts));
}

double LengthPrior::operator()(std::size_t T, std::size_t V) const {
  auto it = table_.find({T, V});
  return it == table_.end() ? 0.0 : it->second;
}

std::pair<SymbolString, SymbolString> generate_strings(std::size_t T, std::size_t V, const FactoredTransducer& f,
                                                       Rng& rng) {
  const std::size_t nb = f.target().size();
  SymbolString x, y;
  x.reserve(T);
  y.reserve(V);
  const double omega[3] = {f.omega().del, f.omega().ins, f.omega().sub};
  while (x.size() < T && y.size() < V) {
    switch (draw(omega, rng)) {
      case 0:
        x.push_back(static_cast<Symbol>(draw(f.del_probs(), rng)));
        break;
      case 1:
        y.push_back(static_cast<Symbol>(draw(f.ins_probs(), rng)));
        break;
      default: {
        const std::size_t k = draw(f.sub_probs(), rng);
        x.push_back(static_cast<Symbol>(k / nb));
        y.push_back(static_cast<Symbol>(k % nb));
      }
    }
  }
  while (x.size() < T) x.push_back(static_cast<Symbol>(draw(f.del_probs(), rng)));
  while (y.size() < V) y.push_back(static_cast<Symbol>(draw(f.ins_probs(), rng)));
  return {std::move(x), std::move(y)};
}

std::pair<SymbolString, SymbolString> generate_strings(std::size_t T, std::size_t V, const FactoredTransducer& f,
                                                       std::uint64_t seed) {
  Rng rng(seed);
  return generate_strings(T, V, f, rng);
}

LogMatrix forward_evaluate_strings(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f) {
  check_strings(x, y, f);
  const std::size_t T = x.size(), V = y.size();
  LogMatrix alpha(T + 1, V + 1);
  alpha(0, 0) = 0.0;
  for (std::size_t t = 0; t <= T; ++t) {
    for (std::size_t v = 0; v <= V; ++v) {
      const double a = alpha(t, v);
      if (a == kLogZero) continue;
      const Moves m = moves_from(t, v, x, y, f);
      if (t < T) alpha(t + 1, v) = log_add(alpha(t + 1, v), a + m.del);
      if (v < V) alpha(t, v + 1) = log_add(alpha(t, v + 1), a + m.ins);
      if (t < T && v < V) alpha(t + 1, v + 1) = log_add(alpha(t + 1, v + 1), a + m.sub);
    }
  }
  return alpha;
}

LogMatrix backward_evaluate_strings(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f) {
  check_strings(x, y, f);
  const std::size_t T = x.size(), V = y.size();
  LogMatrix beta(T + 1, V + 1);
  for (std::size_t t = T + 1; t-- > 0;) {
    for (std::size_t v = V + 1; v-- > 0;) {
      if (t == T && v == V) {
        beta(t, v) = 0.0;
        continue;
      }
      const Moves m = moves_from(t, v, x, y, f);
      double b = kLogZero;
      if (t < T) b = log_add(b, m.del + beta(t + 1, v));
      if (v < V) b = log_add(b, m.ins + beta(t, v + 1));
      if (t < T && v < V) b = log_add(b, m.sub + beta(t + 1, v + 1));
      beta(t, v) = b;
    }
  }
  return beta;
}

double conditional_log_probability(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f) {
  return forward_evaluate_strings(x, y, f)(x.size(), y.size());
}

double conditional_probability(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f) {
  return std::exp(conditional_log_probability(x, y, f));
}

double joint_with_length_prior(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f,
                               const LengthPrior& prior) {
  const double p = prior(x.size(), y.size());
  if (p == 0.0) return 0.0;
  return p * conditional_probability(x, y, f);
}

ConditionalDistances conditional_distances(const SymbolString& x, const SymbolString& y,
                                           const FactoredTransducer& f) {
  check_strings(x, y, f);
  const std::size_t T = x.size(), V = y.size();
  LogMatrix best(T + 1, V + 1);
  best(0, 0) = 0.0;
  for (std::size_t t = 0; t <= T; ++t) {
    for (std::size_t v = 0; v <= V; ++v) {
      const double a = best(t, v);
      if (a == kLogZero) continue;
      const Moves m = moves_from(t, v, x, y, f);
      if (t < T) best(t + 1, v) = std::max(best(t + 1, v), a + m.del);
      if (v < V) best(t, v + 1) = std::max(best(t, v + 1), a + m.ins);
      if (t < T && v < V) best(t + 1, v + 1) = std::max(best(t + 1, v + 1), a + m.sub);
    }
  }
  return {nats_to_bits(best(T, V)), nats_to_bits(conditional_log_probability(x, y, f))};
}

FactoredAccumulator::FactoredAccumulator(std::size_t size_a, std::size_t size_b, double smoothing)
    : chi_del(smoothing),
      chi_ins(smoothing),
      chi_sub(smoothing),
      gamma_del(size_a, smoothing),
      gamma_ins(size_b, smoothing),
      gamma_sub(size_a * size_b, smoothing) {}

FactoredAccumulator& FactoredAccumulator::operator+=(const FactoredAccumulator& other) {
  if (gamma_del.size() != other.gamma_del.size() || gamma_ins.size() != other.gamma_ins.size() ||
      gamma_sub.size() != other.gamma_sub.size())
    throw ConfigError("accumulator size mismatch");
  chi_del += other.chi_del;
  chi_ins += other.chi_ins;
  chi_sub += other.chi_sub;
  for (std::size_t i = 0; i < gamma_del.size(); ++i) gamma_del[i] += other.gamma_del[i];
  for (std::size_t i = 0; i < gamma_ins.size(); ++i) gamma_ins[i] += other.gamma_ins[i];
  for (std::size_t i = 0; i < gamma_sub.size(); ++i) gamma_sub[i] += other.gamma_sub[i];
  skipped += other.skipped;
  return *this;
}

double expectation_step_strings(const SymbolString& x, const SymbolString& y, const FactoredTransducer& f,
                                FactoredAccumulator& acc, double lambda) {
  const LogMatrix alpha = forward_evaluate_strings(x, y, f);
  const std::size_t T = x.size(), V = y.size();
  const double z = alpha(T, V);
  if (z == kLogZero) {
    ++acc.skipped;
    return kLogZero;
  }
  if (lambda == 0.0) return z;
  const LogMatrix beta = backward_evaluate_strings(x, y, f);
  const std::size_t nb = f.target().size();
  for (std::size_t t = 0; t <= T; ++t) {
    for (std::size_t v = 0; v <= V; ++v) {
      const double a = alpha(t, v);
      if (a == kLogZero) continue;
      const Moves m = moves_from(t, v, x, y, f);
      if (t < T) {
        const double lp = a + m.del + beta(t + 1, v) - z;
        if (lp != kLogZero) {
          const double p = lambda * std::exp(lp);
          acc.gamma_del[x[t]] += p;
          if (m.interior) acc.chi_del += p;
        }
      }
      if (v < V) {
        const double lp = a + m.ins + beta(t, v + 1) - z;
        if (lp != kLogZero) {
          const double p = lambda * std::exp(lp);
          acc.gamma_ins[y[v]] += p;
          if (m.interior) acc.chi_ins += p;
        }
      }
      if (t < T && v < V) {
        const double lp = a + m.sub + beta(t + 1, v + 1) - z;
        if (lp != kLogZero) {
          const double p = lambda * std::exp(lp);
          acc.gamma_sub[x[t] * nb + y[v]] += p;
          acc.chi_sub += p;
        }
      }
    }
  }
  return z;
}

namespace {

// Renormalized block in logs, or the old block when the counts are all zero.
std::vector<double> renormalize(const std::vector<double>& counts, const std::vector<double>& old_logs) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (!(n > 0.0)) return old_logs;
  std::vector<double> out(counts.size());
  const double log_n = std::log(n);
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = safe_log(counts[i]) - log_n;
  return out;
}

}  // namespace

FactoredTransducer maximization_step_strings(const FactoredTransducer& f, const FactoredAccumulator& acc) {
  if (acc.gamma_del.size() != f.source().size() || acc.gamma_ins.size() != f.target().size() ||
      acc.gamma_sub.size() != f.source().size() * f.target().size())
    throw ConfigError("accumulator does not match transducer");
  const std::vector<double> chi = {acc.chi_del, acc.chi_ins, acc.chi_sub};
  const double gd = std::accumulate(acc.gamma_del.begin(), acc.gamma_del.end(), 0.0);
  const double gi = std::accumulate(acc.gamma_ins.begin(), acc.gamma_ins.end(), 0.0);
  const double gs = std::accumulate(acc.gamma_sub.begin(), acc.gamma_sub.end(), 0.0);
  if (!(chi[0] + chi[1] + chi[2] > 0.0) && !(gd + gi + gs > 0.0))
    throw TrainingError("maximization step with no expected counts");
  const std::vector<double> omega =
      renormalize(chi, {f.log_omega_del(), f.log_omega_ins(), f.log_omega_sub()});
  return FactoredTransducer::from_log_probabilities(
      f.source(), f.target(), {omega[0], omega[1], omega[2]}, renormalize(acc.gamma_del, f.log_del_probs()),
      renormalize(acc.gamma_ins, f.log_ins_probs()), renormalize(acc.gamma_sub, f.log_sub_probs()));
}

FactoredTrainResult train_strings(const FactoredTransducer& initial, const PairCorpus& corpus,
                                  const TrainOptions& options) {
  if (corpus.empty()) throw TrainingError("empty training corpus");
  if (options.threshold < 0.0 || options.smoothing < 0.0) throw ConfigError("threshold and smoothing must be >= 0");
  if (options.mode != ExpectationMode::full) throw ConfigError("factored training supports full expectation only");
  if (options.tying) throw ConfigError("factored training does not support tying");

  const std::size_t na = initial.source().size(), nb = initial.target().size();
  auto pass = [&](const FactoredTransducer& f, FactoredAccumulator* out) {
    const std::size_t chunks = detail::chunk_count(corpus.size(), options.threads);
    std::vector<FactoredAccumulator> partial(chunks, FactoredAccumulator(na, nb, 0.0));
    std::vector<double> ll(chunks, 0.0);
    detail::parallel_chunks(corpus.size(), options.threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const auto& [x, y] = corpus.pairs[k];
        const double lp = out ? expectation_step_strings(x, y, f, partial[c], 1.0)
                              : conditional_log_probability(x, y, f);
        if (lp != kLogZero) ll[c] += lp;
      }
    });
    double total = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
      if (out) *out += partial[c];
      total += ll[c];
    }
    return total;
  };
  auto converged = [&](double prev, double cur) { return std::abs(cur - prev) <= options.threshold * std::abs(prev); };

  FactoredTrainResult r;
  r.model = initial;
  for (int it = 0; it < options.max_iterations; ++it) {
    FactoredAccumulator acc(na, nb, options.smoothing);
    const double ll = pass(r.model, &acc);
    r.skipped = acc.skipped;
    if (acc.skipped == corpus.size()) throw TrainingError("every training pair has zero probability");
    r.log_likelihood.push_back(ll);
    const std::size_t n = r.log_likelihood.size();
    if (n >= 2 && converged(r.log_likelihood[n - 2], ll)) {
      r.converged = true;
      return r;
    }
    r.model = maximization_step_strings(r.model, acc);
    ++r.iterations;
  }
  r.log_likelihood.push_back(pass(r.model, nullptr));
  const std::size_t n = r.log_likelihood.size();
  r.converged = n >= 2 && converged(r.log_likelihood[n - 2], r.log_likelihood[n - 1]);
  return r;
}

}  // namespace stochedit
