#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "stochedit/classifier.hpp"
#include "stochedit/em.hpp"
#include "stochedit/evaluate.hpp"
#include "stochedit/factored.hpp"

using namespace stochedit;

namespace {

Alphabet symbols(std::size_t n) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < n; ++i) s.push_back("s" + std::to_string(i));
  return Alphabet(std::move(s));
}

SymbolString random_string(std::size_t k, std::size_t len, Rng& rng) {
  SymbolString s(len);
  for (auto& c : s) c = static_cast<Symbol>(rng() % k);
  return s;
}

void BM_Forward(benchmark::State& state) {
  Rng rng(1);
  const Alphabet A = symbols(40);
  const Transducer t = random_transducer(A, A, rng);
  const auto len = static_cast<std::size_t>(state.range(0));
  const SymbolString x = random_string(40, len, rng), y = random_string(40, len, rng);
  for (auto _ : state) benchmark::DoNotOptimize(log_joint_probability(x, y, t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Forward)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNSquared);

void BM_Viterbi(benchmark::State& state) {
  Rng rng(2);
  const Alphabet A = symbols(40);
  const Transducer t = random_transducer(A, A, rng);
  const auto len = static_cast<std::size_t>(state.range(0));
  const SymbolString x = random_string(40, len, rng), y = random_string(40, len, rng);
  for (auto _ : state) benchmark::DoNotOptimize(viterbi_distance(x, y, t));
}
BENCHMARK(BM_Viterbi)->RangeMultiplier(2)->Range(8, 128);

void BM_ExpectationStep(benchmark::State& state) {
  Rng rng(3);
  const Alphabet A = symbols(40);
  const Transducer t = random_transducer(A, A, rng);
  const auto len = static_cast<std::size_t>(state.range(0));
  const SymbolString x = random_string(40, len, rng), y = random_string(40, len, rng);
  EditAccumulator acc(t.space());
  for (auto _ : state) benchmark::DoNotOptimize(expectation_step(x, y, t, acc));
}
BENCHMARK(BM_ExpectationStep)->RangeMultiplier(2)->Range(8, 128);

void BM_FactoredForward(benchmark::State& state) {
  Rng rng(4);
  const Alphabet A = symbols(40);
  const FactoredTransducer f = factor(random_transducer(A, A, rng));
  const auto len = static_cast<std::size_t>(state.range(0));
  const SymbolString x = random_string(40, len, rng), y = random_string(40, len, rng);
  for (auto _ : state) benchmark::DoNotOptimize(conditional_log_probability(x, y, f));
}
BENCHMARK(BM_FactoredForward)->RangeMultiplier(2)->Range(8, 128);

void BM_Classify(benchmark::State& state) {
  Rng rng(5);
  const Alphabet A = symbols(10);
  Lexicon lex(A);
  for (int w = 0; w < state.range(0); ++w) lex.add("w" + std::to_string(w), random_string(10, 5 + rng() % 6, rng), 1.0);
  lex.normalize();
  const ClassifierModel m = make_classifier(random_transducer(A, A, rng), lex);
  const SymbolString y = random_string(10, 8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(classify(y, m));
}
BENCHMARK(BM_Classify)->Arg(50)->Arg(500);

}  // namespace
BENCHMARK_MAIN();
