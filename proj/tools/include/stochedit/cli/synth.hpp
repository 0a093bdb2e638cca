#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stochedit/alphabet.hpp"
#include "stochedit/lexicon.hpp"
#include "stochedit/transducer.hpp"

namespace stochedit::cli {

/// Synthetic stand-in for a pronunciation corpus.
///
/// Classes are built from a smaller pool of random root strings: each class
/// prototype is its root after one or two substitutions, so prototypes that
/// share a root are easy to confuse. These substitutions never use a symbol's
/// channel partner, which keeps the channel's likely confusions from turning
/// one class into another. About `variant_rate` of the classes get a second
/// prototype one substitution away from the first. Class frequencies follow
/// a Zipf law.
///
/// Surface forms pass each prototype symbol through a conditional channel:
/// delete with p_del, else substitute with p_sub, else copy. A symbol is
/// inserted before each position and at the end with p_ins. Substitutions
/// pick the symbol's fixed partner with probability partner_mass and a
/// uniform other symbol otherwise; insertions favor low-index symbols.
struct SynthConfig {
  std::size_t classes = 50;
  std::size_t alphabet_size = 10;
  std::size_t min_length = 5;
  std::size_t max_length = 10;
  std::size_t roots = 12;
  double variant_rate = 0.8;
  double zipf_exponent = 1.0;
  double p_sub = 0.10;
  double p_ins = 0.05;
  double p_del = 0.05;
  double partner_mass = 0.95;
  std::size_t train_size = 5000;
  std::size_t test_size = 500;
  std::uint64_t seed = 1997;
};

struct SynthBenchmark {
  Alphabet alphabet;
  Lexicon lexicon;  // true prototypes, uniform word/entry hierarchy
  LabeledCorpus train;
  LabeledCorpus test;
  // Memoryless transducer fit to the edit operations the generator actually
  // used on the training set, with one termination per sample.
  Transducer channel;
};

// Throws ConfigError for impossible settings.
SynthBenchmark make_synth_benchmark(const SynthConfig& config);

// Writes alphabet.txt, lexicon.tsv, train.tsv, test.tsv and channel.model.
void write_synth_benchmark(const SynthBenchmark& b, const std::string& directory);

}  // namespace stochedit::cli
