#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "serialize.hpp"
#include "support.hpp"

using namespace wfatest;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("wfalab-test-" + name);
  fs::remove_all(d);
  return d;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("generators") {
  const Instance ex = generate(GeneratorSpec::paper_example(3), 99);
  REQUIRE(ex.requests.size() == 3);
  CHECK(ex.requests[2].x == R(3));
  CHECK(ex.requests[2].y == R(2));
  CHECK(ex.origin == P(0, 0));

  const GeneratorSpec specs[] = {GeneratorSpec::uniform_random(10, 3), GeneratorSpec::random_walk(10, 2),
                                 GeneratorSpec::orthogonal(10, 3), GeneratorSpec::finite_uniform(5, 10),
                                 GeneratorSpec::weighted_line(1, 3, 10, 3)};
  for (const auto& g : specs) {
    INFO(g.name());
    CHECK(instance_to_json(generate(g, 4)) == instance_to_json(generate(g, 4)));
    CHECK(instance_to_json(generate(g, 4)) != instance_to_json(generate(g, 5)));
    const Instance inst = generate(g, 11);
    CHECK(inst.requests.size() == 10);
    for (const auto& r : inst.requests) {
      if (!r.x.is_real()) continue;
      CHECK((r.x.value() * 4).is_integer());
      CHECK((r.y.value() * 4).is_integer());
    }
  }
  const Instance o = generate(GeneratorSpec::orthogonal(12, 5), 3);
  for (std::size_t i = 1; i < o.requests.size(); ++i) {
    if (i % 2 == 0) CHECK(o.requests[i].x == o.requests[i - 1].x);
    else CHECK(o.requests[i].y == o.requests[i - 1].y);
  }
  for (const auto& r : generate(GeneratorSpec::uniform_random(50, 2), 8).requests) {
    CHECK(wfalab::max(r.x.value(), -r.x.value()) <= 2);
  }
  CHECK_THROWS_AS(generate(GeneratorSpec::uniform_random(0, 2), 1), Error);
  CHECK_THROWS_AS(generate(GeneratorSpec::finite_uniform(1, 3), 1), Error);
}

TEST_CASE("instance JSON") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 9; ++t) {
    const auto inst = random_instance(rng, t, 4, 3);
    const std::string text = instance_to_json(*inst);
    CHECK(instance_to_json(instance_from_json(text)) == text);
  }
  const Instance i = instance_from_json(
      R"({"spaceX":{"kind":"real_line"},"spaceY":{"kind":"scaled","weight":"3/2","base":{"kind":"real_line"}},)"
      R"("requests":[["1/2",2],[3,"-1"]]})");
  CHECK(i.origin == P(0, 0));
  CHECK(i.requests[0].x == R(1, 2));
  CHECK(product_distance(i.space_x, i.space_y, P(0, 0), P(1, 2)) == 4);
  const Instance f = instance_from_json(
      R"({"spaceX":{"kind":"finite","table":[[0,1,2],[1,0,1],[2,1,0]]},"spaceY":{"kind":"uniform","size":2},)"
      R"("origin":[1,0],"requests":[[2,1]]})");
  CHECK(f.origin.x.idx() == 1);
  CHECK(code_of([] { instance_from_json("{"); }) == ErrorCode::kParse);
  CHECK(code_of([] {
          instance_from_json(R"({"spaceX":{"kind":"finite","table":[[0,1,5],[1,0,1],[5,1,0]]},)"
                             R"("spaceY":{"kind":"real_line"},"origin":[0,0],"requests":[]})");
        }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_experiment_config(
      R"({"generator":{"kind":"uniform_random","n":5,"range":"3"},"algorithms":["wfa","greedy","wfa:1"],)"
      R"("lambdas":["1/4",0.5],"trials":4,"seed":9,"verify":true,"potential":{"variant":"general"}})");
  REQUIRE(c.algorithms.size() == 4);
  CHECK(c.algorithms[0] == AlgorithmConfig::wfa(Rational(1, 4)));
  CHECK(c.algorithms[1] == AlgorithmConfig::wfa(Rational(1, 2)));
  CHECK(c.algorithms[2] == AlgorithmConfig::greedy());
  CHECK(c.algorithms[3] == AlgorithmConfig::wfa(1));
  CHECK(c.trials == 4);
  CHECK(c.seed == 9);
  CHECK(c.verify);
  CHECK(c.potential.variant == "general");
  CHECK(c.generator.range == 3);
  const ExperimentConfig d = parse_experiment_config(R"({"generator":{"kind":"paper_example","m":4}})");
  REQUIRE(d.algorithms.size() == 1);
  CHECK(d.algorithms[0] == AlgorithmConfig::wfa(1));
  CHECK(d.out_dir == "out");

  CHECK(code_of([] { parse_experiment_config("[1]"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_experiment_config(R"({"algorithms":["wfa"]})"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_experiment_config(R"({"generator":{"kind":"spiral"}})"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_experiment_config(R"({"generator":{"kind":"paper_example","m":3},"trials":-1})"); }) ==
        ErrorCode::kParse);
  CHECK(code_of([] { load_experiment_config("/nonexistent/config.json"); }) == ErrorCode::kIo);
  CHECK(code_of([] { parse_potential_choice(R"({"variant":"cnn","alpha":"x"})"); }) == ErrorCode::kParse);
  const PotentialChoice pc = parse_potential_choice(R"({"variant":"cnn","alpha":"1/40"})");
  const PotentialConfig cfg = pc.resolve(Rational(1, 2), *line_instance({}));
  CHECK(cfg.alpha == Rational(1, 40));
  CHECK(code_of([] {
          parse_potential_choice(R"({"variant":"cnn","alpha":"1/2"})").resolve(Rational(1, 2), *line_instance({}));
        }) == ErrorCode::kInvalidArgument);
  CHECK(file_tag(AlgorithmConfig::wfa(Rational(1, 2))) == "wfa-1_2");
  CHECK(file_tag(AlgorithmConfig::retrospective()) == "retrospective");
}

TEST_CASE("experiment on the path example") {
  ExperimentConfig c;
  c.generator = GeneratorSpec::paper_example(20);
  c.algorithms = {AlgorithmConfig::wfa(1)};
  c.out_dir = scratch_dir("example").string();
  const ExperimentResult r = run_experiment(c);
  CHECK(r.exit_status == 0);
  CHECK(r.rows == 1);
  const std::string csv = slurp(fs::path(c.out_dir) / "summary.csv");
  CHECK(csv.rfind(summary_csv_header(), 0) == 0);
  CHECK(csv.find("paper_example,0,wfa:1,1,20,20,2,10,") != std::string::npos);
  const std::string trace = slurp(fs::path(c.out_dir) / "traces" / "0-wfa-1.jsonl");
  std::size_t lines = 0;
  for (char ch : trace) lines += ch == '\n';
  CHECK(lines == 22);
  fs::remove_all(c.out_dir);
}

TEST_CASE("zero trials and determinism") {
  ExperimentConfig c;
  c.generator = GeneratorSpec::uniform_random(4, 3);
  c.algorithms = {AlgorithmConfig::wfa(Rational(1, 2)), AlgorithmConfig::greedy()};
  c.trials = 0;
  c.out_dir = scratch_dir("empty").string();
  const ExperimentResult e = run_experiment(c);
  CHECK(e.exit_status == 0);
  CHECK(e.rows == 0);
  CHECK(slurp(fs::path(c.out_dir) / "summary.csv") == summary_csv_header() + "\n");

  c.trials = 3;
  c.verify = true;
  c.seed = 21;
  c.out_dir = scratch_dir("one-job").string();
  const ExperimentResult a = run_experiment(c);
  CHECK(a.exit_status == 0);
  CHECK(a.rows == 6);
  const std::string margins = slurp(fs::path(c.out_dir) / "lemma_margins.csv");
  CHECK(margins.rfind("check,relation,evaluated,failures,minMargin\n", 0) == 0);
  CHECK(margins.find("\nphi_increase,>=,12,0,") != std::string::npos);
  c.jobs = 3;
  const std::string first = c.out_dir;
  c.out_dir = scratch_dir("three-jobs").string();
  run_experiment(c);
  CHECK(slurp(fs::path(first) / "summary.csv") == slurp(fs::path(c.out_dir) / "summary.csv"));
  for (int t = 0; t < 3; ++t) {
    for (const char* tag : {"wfa-1_2", "greedy"}) {
      const std::string name = std::to_string(t) + "-" + tag + ".jsonl";
      CHECK(slurp(fs::path(first) / "traces" / name) == slurp(fs::path(c.out_dir) / "traces" / name));
      CHECK_FALSE(slurp(fs::path(first) / "traces" / name).empty());
    }
  }
  fs::remove_all(first);
  fs::remove_all(c.out_dir);
}
