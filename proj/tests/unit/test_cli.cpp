#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "stochedit/cli/commands.hpp"
#include "stochedit/cli/experiment.hpp"
#include "stochedit/cli/synth.hpp"
#include "stochedit/evaluate.hpp"
#include "stochedit/io.hpp"

namespace fs = std::filesystem;
using namespace stochedit;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("stochedit-cli-" + std::to_string(std::rand()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run({"no-such-command"}).code == cli::kExitInput);
  CHECK(run({"distance", "--x", "a"}).code == cli::kExitInput);
}

TEST_CASE("levenshtein distance needs no model") {
  const Result r = run({"distance", "--kind", "levenshtein", "--x", "a b c", "--y", "a c"});
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");
  CHECK(run({"distance", "--x", "a", "--y", "b"}).code == cli::kExitInput);
}

TEST_CASE("train a distance and query it") {
  TempDir dir;
  io::write_file(dir / "pairs.tsv", "a b b\tc c\n");
  const Result train = run({"train-distance", "--pairs", dir / "pairs.tsv", "--out", dir / "t.model", "--iterations",
                            "50", "--threshold", "0"});
  REQUIRE(train.code == 0);
  CHECK(train.out.find("iteration 0\tlog-likelihood ") != std::string::npos);
  std::istringstream is(io::read_file(dir / "t.model"));
  const Transducer t = io::load_transducer(is);
  CHECK(t.source().symbols() == std::vector<std::string>{"a", "b"});
  CHECK(t.target().symbols() == std::vector<std::string>{"c"});

  const Result d = run({"distance", "--model", dir / "t.model", "--x", "a b b", "--y", "c c"});
  REQUIRE(d.code == 0);
  const double bits = std::stod(d.out);
  CHECK(bits == doctest::Approx(stochastic_distance(t.source().encode("a b b"), t.target().encode("c c"), t)));

  const Result v = run({"distance", "--model", dir / "t.model", "--x", "a b b", "--y", "c c", "--kind", "viterbi",
                        "--alignment"});
  CHECK(v.code == 0);
  CHECK(v.out.find('#') != std::string::npos);

  CHECK(run({"distance", "--model", dir / "t.model", "--x", "z", "--y", "c"}).code == cli::kExitInput);
  CHECK(run({"distance", "--model", dir / "missing.model", "--x", "a", "--y", "c"}).code == cli::kExitInput);

  const Result f = run({"train-distance", "--pairs", dir / "pairs.tsv", "--out", dir / "f.model", "--factored"});
  CHECK(f.code == 0);
  const Result g = run({"generate", "--model", dir / "f.model", "--count", "3", "--lengths", "2", "1"});
  CHECK(g.code == 0);
  CHECK(std::count(g.out.begin(), g.out.end(), '\n') == 3);
}

TEST_CASE("malformed input exits with code 1") {
  TempDir dir;
  io::write_file(dir / "pairs.tsv", "a b\n");
  const Result r = run({"train-distance", "--pairs", dir / "pairs.tsv", "--out", dir / "t.model"});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find("pairs.tsv:1") != std::string::npos);
  io::write_file(dir / "pairs.tsv", "a\tb\n");
  CHECK(run({"train-distance", "--pairs", dir / "pairs.tsv", "--out", dir / "t.model", "--tying", "bogus"}).code ==
        cli::kExitInput);
}

TEST_CASE("training failure exits with code 2") {
  TempDir dir;
  io::write_file(dir / "alphabet.txt", "a b\n");
  io::write_file(dir / "lexicon.tsv", "cat\ta b\n");
  io::write_file(dir / "train.tsv", "dog\ta\n");
  const Result r = run({"train-classifier", "--train", dir / "train.tsv", "--alphabet", dir / "alphabet.txt",
                        "--lexicon", dir / "lexicon.tsv", "--out", dir / "c.model"});
  CHECK(r.code == cli::kExitTraining);
}

TEST_CASE("synthetic benchmark end to end") {
  cli::SynthConfig cfg;
  cfg.classes = 8;
  cfg.roots = 4;
  cfg.train_size = 200;
  cfg.test_size = 50;
  const cli::SynthBenchmark a = cli::make_synth_benchmark(cfg), b = cli::make_synth_benchmark(cfg);
  CHECK(a.train.size() == 200);
  CHECK(a.test.size() == 50);
  REQUIRE(a.train.samples.size() == b.train.samples.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) CHECK(a.train.samples[i].y == b.train.samples[i].y);
  CHECK(validate(a.channel).valid_string_pair_model());

  TempDir dir;
  const std::string out = dir / "bench";
  REQUIRE(run({"synth-benchmark", "--out-dir", out, "--classes", "8", "--roots", "4", "--train-size", "200",
               "--test-size", "50"})
              .code == 0);
  for (const char* f : {"alphabet.txt", "lexicon.tsv", "train.tsv", "test.tsv", "channel.model"})
    CHECK(fs::exists(fs::path(out) / f));

  const Result tc = run({"train-classifier", "--train", out + "/train.tsv", "--alphabet", out + "/alphabet.txt",
                         "--lexicon", out + "/lexicon.tsv", "--out", dir / "c.model", "--tying", "four-class"});
  REQUIRE(tc.code == 0);
  const Result ev = run({"eval", "--model", dir / "c.model", "--test", out + "/test.tsv"});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("error ") != std::string::npos);
  const Result cl = run({"classify", "--model", dir / "c.model", "--input", out + "/test.tsv"});
  CHECK(cl.code == 0);
  CHECK(std::count(cl.out.begin(), cl.out.end(), '\n') == 50);

  const Result ex = run({"experiment", "--train", out + "/train.tsv", "--test", out + "/test.tsv", "--alphabet",
                         out + "/alphabet.txt", "--lexicon", out + "/lexicon.tsv", "--iterations", "3"});
  REQUIRE(ex.code == 0);
  CHECK(ex.out.find("Levenshtein") != std::string::npos);
  CHECK(ex.out.find("mixed") != std::string::npos);
}
