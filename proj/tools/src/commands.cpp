#include "stochedit/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "stochedit/classic.hpp"
#include "stochedit/classifier.hpp"
#include "stochedit/cli/experiment.hpp"
#include "stochedit/cli/synth.hpp"
#include "stochedit/errors.hpp"
#include "stochedit/evaluate.hpp"
#include "stochedit/factored.hpp"
#include "stochedit/io.hpp"

namespace stochedit::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Alphabet load_alphabet(const std::string& path) {
  std::istringstream is(io::read_file(path));
  return io::read_alphabet(is, path);
}

io::TokenLines load_lines(const std::string& path) {
  std::istringstream is(io::read_file(path));
  return io::read_token_lines(is, path);
}

std::optional<TyingScheme> parse_tying(const std::string& name, const Alphabet& a, const Alphabet& b) {
  if (name == "none") return std::nullopt;
  if (name == "four-class") return TyingScheme::four_class(a, b);
  throw ConfigError("unknown tying scheme '" + name + "'");
}

Interpretation parse_interpretation(const std::string& s) {
  if (s == "stochastic") return Interpretation::stochastic;
  if (s == "viterbi") return Interpretation::viterbi;
  throw ConfigError("unknown interpretation '" + s + "'");
}

bool is_model_text(const std::string& text) { return text.rfind(io::kMagic, 0) == 0; }

Lexicon load_any_lexicon(const std::string& path, const Alphabet& alphabet) {
  const std::string text = io::read_file(path);
  std::istringstream is(text);
  if (is_model_text(text)) {
    Lexicon lex = io::load_lexicon(is, path);
    if (!(lex.alphabet() == alphabet)) throw InputError(path + ": lexicon alphabet differs from --alphabet");
    return lex;
  }
  return io::read_lexicon_tsv(is, alphabet, path);
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    io::write_file(path, content);
  }
}

template <typename Model>
std::string saved(const Model& m) {
  std::ostringstream os;
  io::save(os, m);
  return os.str();
}

void print_trace(std::ostream& out, const std::vector<double>& ll, bool converged, std::size_t skipped) {
  for (std::size_t k = 0; k < ll.size(); ++k) out << "iteration " << k << "\tlog-likelihood " << num(ll[k]) << '\n';
  out << (converged ? "converged" : "not converged") << "; skipped " << skipped << " zero-probability samples\n";
}

struct TrainDistanceArgs {
  std::string pairs, source_alphabet, target_alphabet, out, tying = "none", mode = "full", init = "uniform";
  int iterations = 10;
  double threshold = 1e-6, smoothing = 0.0;
  std::uint64_t seed = 1;
  bool factored = false;
  unsigned threads = 1;
};

void train_distance(const TrainDistanceArgs& a, std::ostream& out) {
  const io::TokenLines lines = load_lines(a.pairs);
  if (lines.left.empty()) throw InputError(a.pairs + ": no string pairs");
  const Alphabet A = a.source_alphabet.empty() ? io::infer_alphabet(lines.left) : load_alphabet(a.source_alphabet);
  const Alphabet B = a.target_alphabet.empty() ? io::infer_alphabet(lines.right) : load_alphabet(a.target_alphabet);
  const PairCorpus corpus = io::encode_pair_corpus(lines, A, B, a.pairs);

  TrainOptions opts;
  opts.max_iterations = a.iterations;
  opts.threshold = a.threshold;
  opts.smoothing = a.smoothing;
  opts.threads = a.threads;
  if (a.mode == "viterbi") {
    opts.mode = ExpectationMode::viterbi;
  } else if (a.mode != "full") {
    throw ConfigError("unknown expectation mode '" + a.mode + "'");
  }
  if (a.init != "uniform" && a.init != "random") throw ConfigError("unknown initialization '" + a.init + "'");
  Rng rng(a.seed);

  if (a.factored) {
    if (a.tying != "none") throw ConfigError("factored training does not support tying");
    const FactoredTransducer init =
        a.init == "uniform" ? FactoredTransducer::uniform(A, B) : factor(random_transducer(A, B, rng));
    const FactoredTrainResult r = train_strings(init, corpus, opts);
    print_trace(out, r.log_likelihood, r.converged, r.skipped);
    write_output(a.out, saved(r.model), out);
    return;
  }
  opts.tying = parse_tying(a.tying, A, B);
  const Transducer init = a.init == "uniform" ? Transducer::uniform(A, B) : random_transducer(A, B, rng);
  const TrainResult r = train(init, corpus, opts);
  print_trace(out, r.log_likelihood, r.converged, r.skipped);
  write_output(a.out, saved(r.model), out);
}

struct DistanceArgs {
  std::string model, x, y, kind = "stochastic";
  bool alignment = false;
};

void distance(const DistanceArgs& a, std::ostream& out) {
  if (a.model.empty()) {
    if (a.kind != "levenshtein") throw ConfigError("--model is required unless --kind levenshtein");
    std::vector<std::vector<std::string>> both = {split_tokens(a.x), split_tokens(a.y)};
    if (both[0].empty() && both[1].empty()) {
      out << "0\n";
      return;
    }
    const Alphabet ab = io::infer_alphabet(both);
    const ClassicResult r = classic_edit_distance(ab.encode(a.x), ab.encode(a.y), CostFunction::levenshtein(ab, ab));
    out << num(r.cost) << '\n';
    return;
  }
  const std::string text = io::read_file(a.model);
  std::istringstream is(text);
  switch (io::peek_kind(is, a.model)) {
    case io::ModelKind::transducer: {
      const Transducer t = io::load_transducer(is, a.model);
      const SymbolString x = t.source().encode(a.x), y = t.target().encode(a.y);
      if (a.kind == "stochastic") {
        out << num(stochastic_distance(x, y, t)) << '\n';
      } else if (a.kind == "viterbi") {
        const ViterbiResult r = viterbi_distance(x, y, t);
        out << num(r.bits) << '\n';
        if (a.alignment) {
          for (const EditOp& op : r.alignment.ops) {
            switch (op.kind) {
              case OpKind::substitution: out << t.source().symbol(op.a) << ':' << t.target().symbol(op.b) << ' '; break;
              case OpKind::deletion: out << t.source().symbol(op.a) << ":" << kEpsilonToken << ' '; break;
              case OpKind::insertion: out << kEpsilonToken << ':' << t.target().symbol(op.b) << ' '; break;
              case OpKind::termination: out << kEndToken; break;
            }
          }
          out << '\n';
        }
      } else if (a.kind == "levenshtein") {
        out << num(classic_edit_cost(x, y, CostFunction::levenshtein(t.source(), t.target()))) << '\n';
      } else {
        throw ConfigError("unknown distance kind '" + a.kind + "'");
      }
      return;
    }
    case io::ModelKind::mixture: {
      const MixtureTransducer m = io::load_mixture(is, a.model);
      const SymbolString x = m.source().encode(a.x), y = m.target().encode(a.y);
      if (a.kind != "stochastic" && a.kind != "viterbi") throw ConfigError("mixtures support stochastic or viterbi");
      const auto interp = a.kind == "stochastic" ? Interpretation::stochastic : Interpretation::viterbi;
      out << num(mixture_distance_fn(m, interp)(x, y)) << '\n';
      return;
    }
    case io::ModelKind::factored: {
      const FactoredTransducer f = io::load_factored(is, a.model);
      const ConditionalDistances d = conditional_distances(f.source().encode(a.x), f.target().encode(a.y), f);
      if (a.kind == "stochastic") {
        out << num(d.stochastic_bits) << '\n';
      } else if (a.kind == "viterbi") {
        out << num(d.viterbi_bits) << '\n';
      } else {
        throw ConfigError("factored models support stochastic or viterbi");
      }
      return;
    }
    default:
      throw ConfigError(a.model + ": not a transducer, mixture, or factored model");
  }
}

struct TrainClassifierArgs {
  std::string train, test, alphabet, lexicon, build_lexicon, out, interpretation = "stochastic", tying = "none";
  int iterations = 10;
  double threshold = 1e-6, lexicon_smoothing = 0.1, transducer_smoothing = 0.0;
  bool fix_word = false, fix_entry = false;
  unsigned threads = 1;
};

void train_classifier_cmd(const TrainClassifierArgs& a, std::ostream& out) {
  const io::TokenLines train_lines = load_lines(a.train);
  Alphabet alphabet;
  if (!a.alphabet.empty()) {
    alphabet = load_alphabet(a.alphabet);
  } else {
    auto tokens = train_lines.right;
    if (!a.test.empty()) {
      const auto more = load_lines(a.test).right;
      tokens.insert(tokens.end(), more.begin(), more.end());
    }
    alphabet = io::infer_alphabet(tokens);
  }
  const LabeledCorpus train = io::encode_labeled_corpus(train_lines, alphabet, a.train);

  std::optional<Lexicon> lexicon;
  if (!a.lexicon.empty() && !a.build_lexicon.empty()) throw ConfigError("give --lexicon or --build-lexicon, not both");
  if (!a.lexicon.empty()) {
    lexicon = load_any_lexicon(a.lexicon, alphabet);
  } else {
    const auto mode = parse_lexicon_mode(a.build_lexicon);
    if (!mode || *mode == LexiconMode::external) throw ConfigError("--build-lexicon must be from-train or from-all");
    LabeledCorpus test;
    if (*mode == LexiconMode::from_all) {
      if (a.test.empty()) throw ConfigError("--build-lexicon from-all needs --test");
      test = io::encode_labeled_corpus(load_lines(a.test), alphabet, a.test);
    }
    lexicon = select_lexicon(*mode, train, test, alphabet, std::nullopt);
  }

  ClassifierModel m =
      make_classifier(Transducer::uniform(alphabet, alphabet), *lexicon, parse_interpretation(a.interpretation));
  m.adapt_word = !a.fix_word;
  m.adapt_entry = !a.fix_entry;
  ClassifierTrainOptions opts;
  opts.max_iterations = a.iterations;
  opts.threshold = a.threshold;
  opts.lexicon_smoothing = a.lexicon_smoothing;
  opts.transducer_smoothing = a.transducer_smoothing;
  opts.tying = parse_tying(a.tying, alphabet, alphabet);
  opts.threads = a.threads;
  const ClassifierTrainResult r = train_classifier(m, train, opts);
  print_trace(out, r.log_likelihood, r.converged, r.skipped);
  write_output(a.out, saved(r.model), out);
}

ClassifierModel load_classifier_file(const std::string& path) {
  std::istringstream is(io::read_file(path));
  return io::load_classifier(is, path);
}

void classify_cmd(const std::string& model_path, const std::string& input, std::ostream& out) {
  const ClassifierModel m = load_classifier_file(model_path);
  std::istringstream is(io::read_file(input));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    const std::size_t tab = line.find('\t');
    const std::string field = tab == std::string::npos ? line : line.substr(tab + 1);
    SymbolString y;
    try {
      y = m.channel.target().encode(field);
    } catch (const InputError& e) {
      throw InputError(input + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const Decision d = classify(y, m);
    std::string labels;
    for (const auto& l : d.labels) labels += (labels.empty() ? "" : " ") + l;
    out << (d.empty() ? "<none>" : labels) << '\t' << num(d.score) << '\n';
  }
}

void eval_cmd(const std::string& model_path, const std::string& test_path, unsigned threads, std::ostream& out) {
  const ClassifierModel m = load_classifier_file(model_path);
  std::istringstream is(io::read_file(test_path));
  const LabeledCorpus test = io::read_labeled_corpus(is, m.channel.target(), test_path);
  const auto decisions = classify_corpus(m, test, threads);
  std::size_t undecided = 0;
  for (const auto& d : decisions) undecided += d.empty() ? 1 : 0;
  out << "samples " << test.size() << "\nundecided " << undecided << "\nerror " << num(word_error_rate(decisions, test))
      << '\n';
}

struct ExperimentArgs {
  std::string train, test, alphabet, lexicon, lexicon_mode = "external", paradigm = "mixture";
  int iterations = 10;
  double threshold = 1e-6, lexicon_smoothing = 0.1;
  bool fix_word = false, fix_entry = false;
  unsigned threads = 1;
};

void experiment_cmd(const ExperimentArgs& a, std::ostream& out) {
  const Alphabet alphabet = load_alphabet(a.alphabet);
  std::istringstream train_is(io::read_file(a.train)), test_is(io::read_file(a.test));
  const LabeledCorpus train = io::read_labeled_corpus(train_is, alphabet, a.train);
  const LabeledCorpus test = io::read_labeled_corpus(test_is, alphabet, a.test);
  ExperimentConfig config;
  const auto mode = parse_lexicon_mode(a.lexicon_mode);
  if (!mode) throw ConfigError("unknown lexicon mode '" + a.lexicon_mode + "'");
  const auto paradigm = parse_paradigm(a.paradigm);
  if (!paradigm) throw ConfigError("unknown paradigm '" + a.paradigm + "'");
  config.lexicon_mode = *mode;
  config.paradigm = *paradigm;
  config.iterations = a.iterations;
  config.threshold = a.threshold;
  config.lexicon_smoothing = a.lexicon_smoothing;
  config.adapt_word = !a.fix_word;
  config.adapt_entry = !a.fix_entry;
  config.threads = a.threads;
  std::optional<Lexicon> external;
  if (!a.lexicon.empty()) external = load_any_lexicon(a.lexicon, alphabet);
  const Lexicon lexicon = select_lexicon(config.lexicon_mode, train, test, alphabet, external);
  print_report(out, run_experiment(train, test, lexicon, config));
}

struct GenerateArgs {
  std::string model, out;
  std::size_t count = 100;
  std::uint64_t seed = 1;
  std::vector<std::size_t> lengths;
};

void generate_cmd(const GenerateArgs& a, std::ostream& out) {
  const std::string text = io::read_file(a.model);
  std::istringstream is(text);
  Rng rng(a.seed);
  std::ostringstream os;
  switch (io::peek_kind(is, a.model)) {
    case io::ModelKind::transducer:
    case io::ModelKind::mixture: {
      const bool single = io::peek_kind(is, a.model) == io::ModelKind::transducer;
      const MixtureTransducer m = single ? uniform_mixture({io::load_transducer(is, a.model)}) : io::load_mixture(is, a.model);
      if (!a.lengths.empty()) throw ConfigError("--lengths applies to factored models only");
      for (std::size_t i = 0; i < a.count; ++i) {
        std::size_t k = 0;
        if (m.size() > 1) {
          const double u = uniform01(rng);
          double acc = 0.0;
          for (k = 0; k + 1 < m.size(); ++k) {
            acc += m.weight(k);
            if (u < acc) break;
          }
        }
        const Alignment al = generate(m.component(k), rng);
        os << m.source().decode(al.x) << '\t' << m.target().decode(al.y) << '\n';
      }
      break;
    }
    case io::ModelKind::factored: {
      const FactoredTransducer f = io::load_factored(is, a.model);
      if (a.lengths.size() != 2) throw ConfigError("factored generation needs --lengths T V");
      for (std::size_t i = 0; i < a.count; ++i) {
        const auto [x, y] = generate_strings(a.lengths[0], a.lengths[1], f, rng);
        os << f.source().decode(x) << '\t' << f.target().decode(y) << '\n';
      }
      break;
    }
    default:
      throw ConfigError(a.model + ": cannot generate from this model kind");
  }
  write_output(a.out, os.str(), out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learned string edit distance: stochastic transducers, EM training and string classification"};
  app.require_subcommand(1);
  std::function<void()> action;

  TrainDistanceArgs td;
  auto* c_td = app.add_subcommand("train-distance", "Train a transducer on a pair corpus with EM");
  c_td->add_option("--pairs", td.pairs, "Pair corpus (x-tokens TAB y-tokens)")->required();
  c_td->add_option("--source-alphabet", td.source_alphabet, "Source alphabet file (default: inferred)");
  c_td->add_option("--target-alphabet", td.target_alphabet, "Target alphabet file (default: inferred)");
  c_td->add_option("--out", td.out, "Model output path ('-' for stdout)")->required();
  c_td->add_option("--iterations", td.iterations, "Maximum EM iterations")->capture_default_str();
  c_td->add_option("--threshold", td.threshold, "Relative log-likelihood convergence threshold")->capture_default_str();
  c_td->add_option("--smoothing", td.smoothing, "Initial value of every expected count")->capture_default_str();
  c_td->add_option("--tying", td.tying, "none | four-class")->capture_default_str();
  c_td->add_option("--mode", td.mode, "full | viterbi")->capture_default_str();
  c_td->add_option("--init", td.init, "uniform | random")->capture_default_str();
  c_td->add_option("--seed", td.seed, "Seed for --init random")->capture_default_str();
  c_td->add_flag("--factored", td.factored, "Train the length-conditioned factored model");
  c_td->add_option("--threads", td.threads, "Worker threads")->capture_default_str();
  c_td->callback([&] { action = [&] { train_distance(td, out); }; });

  DistanceArgs ds;
  auto* c_ds = app.add_subcommand("distance", "Distance between two strings, in bits");
  c_ds->add_option("--model", ds.model, "Transducer, mixture or factored model");
  c_ds->add_option("--x", ds.x, "Source string (space-separated tokens)")->required();
  c_ds->add_option("--y", ds.y, "Target string (space-separated tokens)")->required();
  c_ds->add_option("--kind", ds.kind, "stochastic | viterbi | levenshtein")->capture_default_str();
  c_ds->add_flag("--alignment", ds.alignment, "Also print the Viterbi alignment");
  c_ds->callback([&] { action = [&] { distance(ds, out); }; });

  TrainClassifierArgs tc;
  auto* c_tc = app.add_subcommand("train-classifier", "Train a hidden-prototype classifier with mixture EM");
  c_tc->add_option("--train", tc.train, "Labeled corpus (class TAB y-tokens)")->required();
  c_tc->add_option("--test", tc.test, "Labeled test corpus (for --build-lexicon from-all)");
  c_tc->add_option("--alphabet", tc.alphabet, "Alphabet file (default: inferred)");
  c_tc->add_option("--lexicon", tc.lexicon, "Lexicon (class TAB form [TAB weight], or a lexicon model)");
  c_tc->add_option("--build-lexicon", tc.build_lexicon, "from-train | from-all");
  c_tc->add_option("--out", tc.out, "Model output path ('-' for stdout)")->required();
  c_tc->add_option("--interpretation", tc.interpretation, "stochastic | viterbi")->capture_default_str();
  c_tc->add_option("--tying", tc.tying, "none | four-class")->capture_default_str();
  c_tc->add_option("--iterations", tc.iterations, "Maximum EM iterations")->capture_default_str();
  c_tc->add_option("--threshold", tc.threshold, "Relative log-likelihood convergence threshold")->capture_default_str();
  c_tc->add_option("--lexicon-smoothing", tc.lexicon_smoothing, "Initial lexicon expected count")->capture_default_str();
  c_tc->add_option("--transducer-smoothing", tc.transducer_smoothing, "Initial edit expected count")
      ->capture_default_str();
  c_tc->add_flag("--fix-word", tc.fix_word, "Keep p(w) fixed during training");
  c_tc->add_flag("--fix-entry", tc.fix_entry, "Keep p(x | w) fixed during training");
  c_tc->add_option("--threads", tc.threads, "Worker threads")->capture_default_str();
  c_tc->callback([&] { action = [&] { train_classifier_cmd(tc, out); }; });

  std::string cl_model, cl_input;
  auto* c_cl = app.add_subcommand("classify", "Classify each string of a file");
  c_cl->add_option("--model", cl_model, "Classifier model")->required();
  c_cl->add_option("--input", cl_input, "One string per line (a label TAB prefix is ignored)")->required();
  c_cl->callback([&] { action = [&] { classify_cmd(cl_model, cl_input, out); }; });

  std::string ev_model, ev_test;
  unsigned ev_threads = 1;
  auto* c_ev = app.add_subcommand("eval", "Word error rate of a classifier on a labeled corpus");
  c_ev->add_option("--model", ev_model, "Classifier model")->required();
  c_ev->add_option("--test", ev_test, "Labeled test corpus")->required();
  c_ev->add_option("--threads", ev_threads, "Worker threads")->capture_default_str();
  c_ev->callback([&] { action = [&] { eval_cmd(ev_model, ev_test, ev_threads, out); }; });

  ExperimentArgs ex;
  auto* c_ex = app.add_subcommand("experiment", "Levenshtein baseline and the tied/untied/mixed model grid");
  c_ex->add_option("--train", ex.train, "Labeled training corpus")->required();
  c_ex->add_option("--test", ex.test, "Labeled test corpus")->required();
  c_ex->add_option("--alphabet", ex.alphabet, "Alphabet file")->required();
  c_ex->add_option("--lexicon", ex.lexicon, "Lexicon file for --lexicon-mode external");
  c_ex->add_option("--lexicon-mode", ex.lexicon_mode, "external | from-train | from-all")->capture_default_str();
  c_ex->add_option("--paradigm", ex.paradigm, "mixture | adhoc")->capture_default_str();
  c_ex->add_option("--iterations", ex.iterations, "Maximum EM iterations")->capture_default_str();
  c_ex->add_option("--threshold", ex.threshold, "Relative log-likelihood convergence threshold")->capture_default_str();
  c_ex->add_option("--lexicon-smoothing", ex.lexicon_smoothing, "Initial lexicon expected count")->capture_default_str();
  c_ex->add_flag("--fix-word", ex.fix_word, "Keep p(w) fixed during training");
  c_ex->add_flag("--fix-entry", ex.fix_entry, "Keep p(x | w) fixed during training");
  c_ex->add_option("--threads", ex.threads, "Worker threads")->capture_default_str();
  c_ex->callback([&] { action = [&] { experiment_cmd(ex, out); }; });

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Sample a pair corpus from a model");
  c_gen->add_option("--model", gen.model, "Transducer, mixture or factored model")->required();
  c_gen->add_option("--count", gen.count, "Number of pairs")->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  c_gen->add_option("--lengths", gen.lengths, "T V for factored models")->expected(2);
  c_gen->add_option("--out", gen.out, "Output path (default stdout)");
  c_gen->callback([&] { action = [&] { generate_cmd(gen, out); }; });

  SynthConfig sc;
  std::string sc_dir;
  auto* c_sc = app.add_subcommand("synth-benchmark", "Write a synthetic lexicon, train/test corpora and channel");
  c_sc->add_option("--out-dir", sc_dir, "Output directory")->required();
  c_sc->add_option("--seed", sc.seed, "Random seed")->capture_default_str();
  c_sc->add_option("--classes", sc.classes, "Number of word classes")->capture_default_str();
  c_sc->add_option("--alphabet-size", sc.alphabet_size, "Number of symbols")->capture_default_str();
  c_sc->add_option("--min-length", sc.min_length, "Shortest prototype")->capture_default_str();
  c_sc->add_option("--max-length", sc.max_length, "Longest prototype")->capture_default_str();
  c_sc->add_option("--roots", sc.roots, "Distinct root strings")->capture_default_str();
  c_sc->add_option("--variant-rate", sc.variant_rate, "Fraction of classes with a second prototype")
      ->capture_default_str();
  c_sc->add_option("--zipf", sc.zipf_exponent, "Zipf exponent of class frequencies")->capture_default_str();
  c_sc->add_option("--sub", sc.p_sub, "Substitution rate per symbol")->capture_default_str();
  c_sc->add_option("--ins", sc.p_ins, "Insertion rate per position")->capture_default_str();
  c_sc->add_option("--del", sc.p_del, "Deletion rate per symbol")->capture_default_str();
  c_sc->add_option("--partner-mass", sc.partner_mass, "Share of substitutions going to the partner symbol")
      ->capture_default_str();
  c_sc->add_option("--train-size", sc.train_size, "Training samples")->capture_default_str();
  c_sc->add_option("--test-size", sc.test_size, "Test samples")->capture_default_str();
  c_sc->callback([&] {
    action = [&] {
      write_synth_benchmark(make_synth_benchmark(sc), sc_dir);
      out << "wrote " << sc_dir << "/{alphabet.txt,lexicon.tsv,train.tsv,test.tsv,channel.model}\n";
    };
  });

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("stochedit");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  try {
    if (action) action();
    return kExitOk;
  } catch (const TrainingError& e) {
    err << "stochedit: training failed: " << e.what() << '\n';
    return kExitTraining;
  } catch (const InputError& e) {
    err << "stochedit: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "stochedit: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace stochedit::cli
