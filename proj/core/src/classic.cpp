#include "stochedit/classic.hpp"

#include <cstdint>
#include <stdexcept>

#include "stochedit/errors.hpp"
#include "stochedit/logmath.hpp"

namespace stochedit {

CostFunction::CostFunction(Alphabet source, Alphabet target, std::vector<double> costs)
    : source_(std::move(source)),
      target_(std::move(target)),
      space_(source_.size(), target_.size()),
      costs_(std::move(costs)) {
  if (costs_.size() != space_.num_edits()) throw ConfigError("cost table has the wrong size");
  for (double c : costs_) {
    if (!(c >= 0.0)) throw ConfigError("edit costs must be nonnegative");
  }
}

CostFunction CostFunction::levenshtein(Alphabet source, Alphabet target) {
  const EditSpace space(source.size(), target.size());
  std::vector<double> costs(space.num_edits(), 1.0);
  for (Symbol a = 0; a < source.size(); ++a) {
    if (auto b = target.find(source.symbol(a))) costs[space.sub_index(a, *b)] = 0.0;
  }
  return CostFunction(std::move(source), std::move(target), std::move(costs));
}

CostFunction CostFunction::from_transducer(const Transducer& t) {
  const auto logs = t.log_probabilities();
  std::vector<double> costs(t.space().num_edits());
  for (std::size_t i = 0; i < costs.size(); ++i) costs[i] = nats_to_bits(logs[i]);
  return CostFunction(t.source(), t.target(), std::move(costs));
}

ClassicResult classic_edit_distance(const SymbolString& x, const SymbolString& y, const CostFunction& c) {
  c.source().check(x, "source string");
  c.target().check(y, "target string");
  const std::size_t T = x.size(), V = y.size(), W = V + 1;
  std::vector<double> d((T + 1) * W, kInfinity);
  std::vector<std::uint8_t> back((T + 1) * W, 0);
  d[0] = 0.0;
  for (std::size_t i = 0; i <= T; ++i) {
    for (std::size_t j = 0; j <= V; ++j) {
      if (i == 0 && j == 0) continue;
      double best = kInfinity;
      std::uint8_t move = 0;
      if (i > 0 && j > 0) {
        const double s = c.sub(x[i - 1], y[j - 1]) + d[(i - 1) * W + j - 1];
        if (s < best) best = s, move = 1;
      }
      if (i > 0) {
        const double s = c.del(x[i - 1]) + d[(i - 1) * W + j];
        if (s < best) best = s, move = 2;
      }
      if (j > 0) {
        const double s = c.ins(y[j - 1]) + d[i * W + j - 1];
        if (s < best) best = s, move = 3;
      }
      d[i * W + j] = best;
      back[i * W + j] = move;
    }
  }
  ClassicResult r;
  r.cost = d[T * W + V];
  if (r.cost == kInfinity) return r;
  std::vector<EditOp> ops;
  std::size_t i = T, j = V;
  while (i > 0 || j > 0) {
    switch (back[i * W + j]) {
      case 1:
        ops.push_back(EditOp::sub(x[i - 1], y[j - 1]));
        --i, --j;
        break;
      case 2:
        ops.push_back(EditOp::del(x[i - 1]));
        --i;
        break;
      case 3:
        ops.push_back(EditOp::ins(y[j - 1]));
        --j;
        break;
      default:
        throw std::logic_error("broken edit-distance traceback");
    }
  }
  std::vector<EditOp> forward_ops(ops.rbegin(), ops.rend());
  forward_ops.push_back(EditOp::end());
  r.alignment = make_alignment(std::move(forward_ops));
  return r;
}

double classic_edit_cost(const SymbolString& x, const SymbolString& y, const CostFunction& c) {
  c.source().check(x, "source string");
  c.target().check(y, "target string");
  const std::size_t V = y.size();
  std::vector<double> prev(V + 1), cur(V + 1);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= V; ++j) prev[j] = prev[j - 1] + c.ins(y[j - 1]);
  for (Symbol a : x) {
    const double del = c.del(a);
    cur[0] = prev[0] + del;
    for (std::size_t j = 1; j <= V; ++j) {
      cur[j] = std::min({c.sub(a, y[j - 1]) + prev[j - 1], del + prev[j], c.ins(y[j - 1]) + cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[V];
}

}  // namespace stochedit
