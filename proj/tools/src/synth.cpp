#include "stochedit/cli/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "stochedit/edit_op.hpp"
#include "stochedit/errors.hpp"
#include "stochedit/io.hpp"

namespace stochedit::cli {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

std::size_t draw(const std::vector<double>& cumulative, Rng& rng) {
  const double u = uniform01(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulate(std::vector<double> w) {
  for (std::size_t i = 1; i < w.size(); ++i) w[i] += w[i - 1];
  return w;
}

SymbolString random_string(const SynthConfig& c, Rng& rng) {
  const std::size_t len = c.min_length + uniform_index(rng, c.max_length - c.min_length + 1);
  SymbolString s(len);
  for (auto& sym : s) sym = static_cast<Symbol>(uniform_index(rng, c.alphabet_size));
  return s;
}

// Symbols pair up as (0,1), (2,3), ...; an odd last symbol pairs with 0.
Symbol partner(Symbol a, std::size_t n) {
  const Symbol p = a ^ 1u;
  return p < n ? p : 0;
}

// Substitutes one position by a symbol that is neither the old one nor its
// partner, so lexicon neighbors differ in ways the channel rarely produces.
SymbolString mutate(SymbolString s, const SynthConfig& c, Rng& rng) {
  const std::size_t pos = uniform_index(rng, s.size());
  const Symbol old = s[pos];
  while (s[pos] == old || s[pos] == partner(old, c.alphabet_size))
    s[pos] = static_cast<Symbol>(uniform_index(rng, c.alphabet_size));
  return s;
}

class Channel {
 public:
  Channel(const SynthConfig& c, const EditSpace& space) : c_(c), counts_(space.size(), 0.0), space_(space) {
    std::vector<double> ins(c.alphabet_size);
    for (std::size_t b = 0; b < ins.size(); ++b) ins[b] = 1.0 / static_cast<double>(b + 1);
    insert_cdf_ = cumulate(std::move(ins));
  }

  SymbolString corrupt(const SymbolString& x, Rng& rng, bool count) {
    SymbolString y;
    auto maybe_insert = [&] {
      if (uniform01(rng) < c_.p_ins) {
        const auto b = static_cast<Symbol>(draw(insert_cdf_, rng));
        y.push_back(b);
        if (count) counts_[space_.ins_index(b)] += 1.0;
      }
    };
    for (Symbol a : x) {
      maybe_insert();
      const double u = uniform01(rng);
      if (u < c_.p_del) {
        if (count) counts_[space_.del_index(a)] += 1.0;
        continue;
      }
      Symbol b = a;
      if (u < c_.p_del + c_.p_sub) {
        b = uniform01(rng) < c_.partner_mass
                ? partner(a, c_.alphabet_size)
                : static_cast<Symbol>((a + 1 + uniform_index(rng, c_.alphabet_size - 1)) % c_.alphabet_size);
      }
      y.push_back(b);
      if (count) counts_[space_.sub_index(a, b)] += 1.0;
    }
    maybe_insert();
    if (count) counts_[space_.end_index()] += 1.0;
    return y;
  }

  const std::vector<double>& counts() const { return counts_; }

 private:
  const SynthConfig& c_;
  std::vector<double> counts_;
  EditSpace space_;
  std::vector<double> insert_cdf_;
};

}  // namespace

SynthBenchmark make_synth_benchmark(const SynthConfig& c) {
  if (c.classes == 0 || c.roots == 0) throw ConfigError("need at least one class and one root");
  if (c.alphabet_size < 4) throw ConfigError("alphabet needs at least four symbols");
  if (c.min_length == 0 || c.min_length >= c.max_length) throw ConfigError("need 0 < min length < max length");
  for (double p : {c.p_sub, c.p_ins, c.p_del, c.partner_mass, c.variant_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("rates must lie in [0, 1]");
  }
  if (c.p_sub + c.p_del > 1.0) throw ConfigError("substitution plus deletion rate exceeds one");
  if (c.train_size == 0 || c.test_size == 0) throw ConfigError("train and test sizes must be positive");

  Rng rng(c.seed);
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < c.alphabet_size; ++i) symbols.push_back("s" + std::to_string(i));
  SynthBenchmark b{Alphabet(symbols), Lexicon(Alphabet(symbols)), {}, {},
                   Transducer::uniform(Alphabet(symbols), Alphabet(symbols))};

  std::vector<SymbolString> roots;
  for (std::size_t r = 0; r < c.roots; ++r) roots.push_back(random_string(c, rng));

  std::set<SymbolString> used;
  std::vector<std::vector<SymbolString>> prototypes(c.classes);
  std::vector<std::string> names;
  for (std::size_t w = 0; w < c.classes; ++w) {
    char name[16];
    std::snprintf(name, sizeof name, "w%03zu", w);
    names.emplace_back(name);
    const SymbolString& root = roots[w % c.roots];
    SymbolString form;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) throw ConfigError("could not generate distinct prototypes; use more roots or longer strings");
      form = mutate(root, c, rng);
      if (uniform01(rng) < 0.5) form = mutate(form, c, rng);
      if (used.insert(form).second) break;
    }
    prototypes[w].push_back(form);
    if (uniform01(rng) < c.variant_rate) {
      for (int attempt = 0; attempt < 100; ++attempt) {
        SymbolString variant = mutate(form, c, rng);
        if (used.insert(variant).second) {
          prototypes[w].push_back(std::move(variant));
          break;
        }
      }
    }
    for (const auto& p : prototypes[w]) b.lexicon.add(names[w], p, 1.0);
  }
  b.lexicon.set_uniform_hierarchy();

  std::vector<double> zipf(c.classes);
  for (std::size_t w = 0; w < c.classes; ++w) zipf[w] = std::pow(static_cast<double>(w + 1), -c.zipf_exponent);
  const std::vector<double> class_cdf = cumulate(std::move(zipf));
  const std::vector<double> variant_cdf = cumulate({0.7, 0.3});

  Channel channel(c, EditSpace(c.alphabet_size, c.alphabet_size));
  auto sample = [&](bool count) {
    const std::size_t w = draw(class_cdf, rng);
    const std::size_t k = prototypes[w].size() == 1 ? 0 : draw(variant_cdf, rng);
    return LabeledSample{names[w], channel.corrupt(prototypes[w][k], rng, count)};
  };
  for (std::size_t i = 0; i < c.train_size; ++i) b.train.samples.push_back(sample(true));
  for (std::size_t i = 0; i < c.test_size; ++i) b.test.samples.push_back(sample(false));

  std::vector<double> probs = channel.counts();
  double total = 0.0;
  for (double v : probs) total += v;
  for (double& v : probs) v /= total;
  b.channel = Transducer::from_probabilities(b.alphabet, b.alphabet, probs);
  return b;
}

void write_synth_benchmark(const SynthBenchmark& b, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw InputError("cannot create directory '" + directory + "': " + ec.message());
  const fs::path dir(directory);

  std::ostringstream alphabet, lexicon, train, test, channel;
  io::write_alphabet(alphabet, b.alphabet);
  for (std::size_t e = 0; e < b.lexicon.size(); ++e) {
    lexicon << b.lexicon.class_name(b.lexicon.entry(e).cls) << '\t' << b.alphabet.decode(b.lexicon.form_of(e)) << '\n';
  }
  io::write_labeled_corpus(train, b.train, b.alphabet);
  io::write_labeled_corpus(test, b.test, b.alphabet);
  io::save(channel, b.channel);
  io::write_file(dir / "alphabet.txt", alphabet.str());
  io::write_file(dir / "lexicon.tsv", lexicon.str());
  io::write_file(dir / "train.tsv", train.str());
  io::write_file(dir / "test.tsv", test.str());
  io::write_file(dir / "channel.model", channel.str());
}

}  // namespace stochedit::cli
