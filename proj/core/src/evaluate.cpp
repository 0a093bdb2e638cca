#include "stochedit/evaluate.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "stochedit/errors.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit {

double LogMatrix::value(std::size_t t, std::size_t v) const { return std::exp((*this)(t, v)); }

namespace {

void check_pair(const SymbolString& x, const SymbolString& y, const Transducer& t) {
  t.source().check(x, "source string");
  t.target().check(y, "target string");
}

enum Move : std::uint8_t { kNone, kSub, kDel, kIns };

}  // namespace

LogMatrix forward_evaluate(const SymbolString& x, const SymbolString& y, const Transducer& t) {
  check_pair(x, y, t);
  const std::size_t T = x.size(), V = y.size();
  LogMatrix alpha(T + 1, V + 1);
  alpha(0, 0) = 0.0;
  for (std::size_t i = 0; i <= T; ++i) {
    for (std::size_t j = 0; j <= V; ++j) {
      if (i == 0 && j == 0) continue;
      const double ins = j > 0 ? t.log_ins(y[j - 1]) + alpha(i, j - 1) : kLogZero;
      const double del = i > 0 ? t.log_del(x[i - 1]) + alpha(i - 1, j) : kLogZero;
      const double sub = (i > 0 && j > 0) ? t.log_sub(x[i - 1], y[j - 1]) + alpha(i - 1, j - 1) : kLogZero;
      alpha(i, j) = log_add(ins, del, sub);
    }
  }
  alpha(T, V) += t.log_end();
  return alpha;
}

LogMatrix backward_evaluate(const SymbolString& x, const SymbolString& y, const Transducer& t) {
  check_pair(x, y, t);
  const std::size_t T = x.size(), V = y.size();
  LogMatrix beta(T + 1, V + 1);
  beta(T, V) = t.log_end();
  for (std::size_t i = T + 1; i-- > 0;) {
    for (std::size_t j = V + 1; j-- > 0;) {
      if (i == T && j == V) continue;
      const double ins = j < V ? t.log_ins(y[j]) + beta(i, j + 1) : kLogZero;
      const double del = i < T ? t.log_del(x[i]) + beta(i + 1, j) : kLogZero;
      const double sub = (i < T && j < V) ? t.log_sub(x[i], y[j]) + beta(i + 1, j + 1) : kLogZero;
      beta(i, j) = log_add(ins, del, sub);
    }
  }
  return beta;
}

double log_joint_probability(const SymbolString& x, const SymbolString& y, const Transducer& t) {
  check_pair(x, y, t);
  const std::size_t T = x.size(), V = y.size();
  std::vector<double> prev(V + 1), cur(V + 1);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= V; ++j) prev[j] = t.log_ins(y[j - 1]) + prev[j - 1];
  for (std::size_t i = 1; i <= T; ++i) {
    const Symbol a = x[i - 1];
    const double del = t.log_del(a);
    cur[0] = del + prev[0];
    for (std::size_t j = 1; j <= V; ++j) {
      cur[j] = log_add(t.log_ins(y[j - 1]) + cur[j - 1], del + prev[j], t.log_sub(a, y[j - 1]) + prev[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[V] + t.log_end();
}

double joint_probability(const SymbolString& x, const SymbolString& y, const Transducer& t) {
  return std::exp(log_joint_probability(x, y, t));
}

double stochastic_distance(const SymbolString& x, const SymbolString& y, const Transducer& t) {
  return nats_to_bits(log_joint_probability(x, y, t));
}

ViterbiResult viterbi_distance(const SymbolString& x, const SymbolString& y, const Transducer& t) {
  check_pair(x, y, t);
  const std::size_t T = x.size(), V = y.size();
  LogMatrix best(T + 1, V + 1);
  std::vector<std::uint8_t> back((T + 1) * (V + 1), kNone);
  best(0, 0) = 0.0;
  for (std::size_t i = 0; i <= T; ++i) {
    for (std::size_t j = 0; j <= V; ++j) {
      if (i == 0 && j == 0) continue;
      double score = kLogZero;
      std::uint8_t move = kNone;
      // Candidates in tie-break priority order; strict > keeps the first.
      if (i > 0 && j > 0) {
        const double s = t.log_sub(x[i - 1], y[j - 1]) + best(i - 1, j - 1);
        if (s > score) score = s, move = kSub;
      }
      if (i > 0) {
        const double s = t.log_del(x[i - 1]) + best(i - 1, j);
        if (s > score) score = s, move = kDel;
      }
      if (j > 0) {
        const double s = t.log_ins(y[j - 1]) + best(i, j - 1);
        if (s > score) score = s, move = kIns;
      }
      best(i, j) = score;
      back[i * (V + 1) + j] = move;
    }
  }
  const double total = best(T, V) + t.log_end();
  ViterbiResult r;
  r.bits = nats_to_bits(total);
  if (total == kLogZero) return r;

  std::vector<EditOp> ops;
  std::size_t i = T, j = V;
  while (i > 0 || j > 0) {
    switch (back[i * (V + 1) + j]) {
      case kSub:
        ops.push_back(EditOp::sub(x[i - 1], y[j - 1]));
        --i, --j;
        break;
      case kDel:
        ops.push_back(EditOp::del(x[i - 1]));
        --i;
        break;
      case kIns:
        ops.push_back(EditOp::ins(y[j - 1]));
        --j;
        break;
      default:
        throw std::logic_error("broken Viterbi traceback");
    }
  }
  std::vector<EditOp> forward_ops(ops.rbegin(), ops.rend());
  forward_ops.push_back(EditOp::end());
  r.alignment = make_alignment(std::move(forward_ops));
  return r;
}

double viterbi_log_probability(const SymbolString& x, const SymbolString& y, const Transducer& t) {
  check_pair(x, y, t);
  const std::size_t T = x.size(), V = y.size();
  std::vector<double> prev(V + 1), cur(V + 1);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= V; ++j) prev[j] = t.log_ins(y[j - 1]) + prev[j - 1];
  for (std::size_t i = 1; i <= T; ++i) {
    const Symbol a = x[i - 1];
    const double del = t.log_del(a);
    cur[0] = del + prev[0];
    for (std::size_t j = 1; j <= V; ++j) {
      cur[j] = std::max({t.log_sub(a, y[j - 1]) + prev[j - 1], del + prev[j], t.log_ins(y[j - 1]) + cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[V] + t.log_end();
}

double sequence_length_prob(std::size_t n, const Transducer& t) {
  const double end = t.end_prob();
  return std::pow(1.0 - end, static_cast<double>(n)) * end;
}

Alignment generate(const Transducer& t, Rng& rng) {
  if (!(t.end_prob() > 0.0)) throw ConfigError("cannot generate from a transducer with zero termination probability");
  const std::vector<double> probs = t.probabilities();
  const EditSpace& space = t.space();
  std::vector<EditOp> ops;
  for (;;) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t pick = space.end_index();
    for (std::size_t k = 0; k < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    const EditOp op = space.op(pick);
    ops.push_back(op);
    if (op.kind == OpKind::termination) break;
  }
  return make_alignment(std::move(ops));
}

Alignment generate(const Transducer& t, std::uint64_t seed) {
  Rng rng(seed);
  return generate(t, rng);
}

}  // namespace stochedit
