#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algorithms.hpp"

namespace wfalab {

struct GeneratorSpec {
  enum class Kind { kPaperExample, kUniformRandom, kRandomWalk, kOrthogonal, kFiniteUniform, kWeightedLine, kFixed };
  Kind kind = Kind::kUniformRandom;
  std::size_t m = 0;  // path example length
  std::size_t n = 0;  // number of requests
  std::size_t k = 0;  // finite space size
  Rational range{8};  // coordinates in [-range, range]
  Rational step_range{2};
  Rational weight_x{1};
  Rational weight_y{1};
  std::shared_ptr<const Instance> fixed;

  static GeneratorSpec paper_example(std::size_t m);
  static GeneratorSpec uniform_random(std::size_t n, Rational range);
  static GeneratorSpec random_walk(std::size_t n, Rational step_range);
  static GeneratorSpec orthogonal(std::size_t n, Rational range);
  static GeneratorSpec finite_uniform(std::size_t k, std::size_t n);
  static GeneratorSpec weighted_line(Rational wx, Rational wy, std::size_t n, Rational range);

  // "paper_example", "uniform_random", ...
  std::string name() const;
};

// Deterministic in (spec, seed). Random line coordinates are multiples of
// 1/4 within the range.
Instance generate(const GeneratorSpec& spec, std::uint64_t seed);

// Potential constants for verified runs: the variant ("auto", "cnn" or
// "general") and any constants to pin; the rest come from the defaults.
struct PotentialChoice {
  std::string variant = "auto";
  std::optional<Rational> alpha, gamma, mu, eta, beta, kappa;

  PotentialConfig resolve(const Rational& lambda, const Instance& instance) const;
};

struct ExperimentConfig {
  GeneratorSpec generator;
  std::vector<AlgorithmConfig> algorithms;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool verify = false;
  bool audit = false;
  bool probe = true;
  // Cross-check the engine against brute force on short instances.
  bool oracle = true;
  bool dump_work = false;
  PotentialChoice potential;
  std::size_t jobs = 1;
};

// Config JSON:
//   {"generator": {"kind": "uniform_random", "n": 8, "range": 8},
//    "algorithms": ["wfa", "greedy", "retrospective", "wfa:1"],
//    "lambdas": ["1/4", "1/2"],          // expands every bare "wfa"
//    "potential": "default" | {"variant": "cnn", "alpha": "1/28"},
//    "trials": 3, "seed": 7, "out_dir": "out",
//    "verify": true, "audit": false, "probe": true, "oracle": true, "dump_work": false}
// A "fixed" generator carries an "instance" object in the instance format.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
// Just the "generator" object of a config.
GeneratorSpec parse_generator_spec(const std::string& json_text);
// "default" or an object such as {"variant": "general", "beta": "1/300"}.
PotentialChoice parse_potential_choice(const std::string& json_text);

struct ExperimentResult {
  int exit_status = 0;  // 0 clean, 2 lemma failure, 3 oracle disagreement
  std::size_t rows = 0;
  std::size_t lemma_failures = 0;
  std::size_t oracle_disagreements = 0;
  std::size_t ties = 0;
  std::vector<std::string> notes;  // one line per problem found
};

// Writes <out_dir>/summary.csv, <out_dir>/lemma_margins.csv (per-check
// minimum margins over the batch) and <out_dir>/traces/<trial>-<alg>.jsonl.
ExperimentResult run_experiment(const ExperimentConfig& config);

// "wfa:1/2" -> "wfa-1_2"; used in trace file names.
std::string file_tag(const AlgorithmConfig& algorithm);

}  // namespace wfalab
