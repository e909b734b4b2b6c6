// Command-line front end. Talks to the library only through the C API.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wfalab/wfalab.h"

namespace {

void print_note(const char* line, void*) { std::cerr << "  " << line << "\n"; }

int report(wfalab_status st, const wfalab_experiment_summary& s, const std::string& out_dir) {
  if (st != WFALAB_OK) {
    std::cerr << "error (" << wfalab_status_name(st) << "): " << wfalab_last_error() << "\n";
    return 1;
  }
  std::ifstream csv(std::filesystem::path(out_dir) / "summary.csv");
  std::cout << csv.rdbuf();
  std::cerr << s.rows << " runs, " << s.lemma_failures << " failed checks, " << s.oracle_disagreements
            << " oracle disagreements, " << s.ties << " tied WFA moves; wrote " << out_dir << "/summary.csv\n";
  return s.exit_status;
}

// The output directory is not echoed back by the API, so resolve it here.
std::string resolve_out_dir(const std::string& config_path, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  std::ifstream in(config_path);
  try {
    const auto j = nlohmann::json::parse(in);
    return j.value("out_dir", std::string("out"));
  } catch (const nlohmann::json::exception&) {
    return "out";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Work function algorithm lab: simulate the generalized 2-server problem and check the "
               "potential-function inequalities with exact arithmetic."};
  app.set_version_flag("--version", std::string(wfalab_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", out_dir, "Output directory (overrides the config)");
    cmd->add_option("--jobs", jobs, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run a batch experiment from a JSON config");
  run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  CLI::Option* run_seed = run_cmd->add_option("--seed", seed, "Base seed (overrides the config)");
  add_common(run_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Like run, with verification and audit forced on");
  verify_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  CLI::Option* verify_seed = verify_cmd->add_option("--seed", seed, "Base seed (overrides the config)");
  add_common(verify_cmd);

  std::size_t m = 20;
  std::string lambda = "1";
  CLI::App* example_cmd = app.add_subcommand("example", "Run WFA on the path example (i,2), i = 1..m");
  example_cmd->add_option("--m", m, "Number of requests")->check(CLI::PositiveNumber);
  example_cmd->add_option("--lambda", lambda, "WFA parameter, a rational in (0,1]");
  example_cmd->add_option("--seed", seed, "Recorded seed");
  add_common(example_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  wfalab_experiment_overrides ov{};
  ov.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
  ov.jobs = jobs;
  wfalab_experiment_summary summary{};

  if (run_cmd->parsed() || verify_cmd->parsed()) {
    const bool verify = verify_cmd->parsed();
    ov.has_seed = (verify ? verify_seed : run_seed)->count() > 0;
    ov.seed = seed;
    ov.force_verify = verify;
    ov.force_audit = verify;
    const wfalab_status st = wfalab_experiment_run(config_path.c_str(), &ov, &summary, print_note, nullptr);
    return report(st, summary, resolve_out_dir(config_path, out_dir));
  }

  // example
  const std::string dir = out_dir.empty() ? "example-out" : out_dir;
  nlohmann::ordered_json cfg = {{"generator", {{"kind", "paper_example"}, {"m", m}}},
                                {"algorithms", nlohmann::ordered_json::array({"wfa:" + lambda})},
                                {"trials", 1},
                                {"seed", seed},
                                {"out_dir", dir},
                                {"verify", true}};  // skipped by the run for lambda = 1
  ov.out_dir = dir.c_str();
  const std::string text = cfg.dump();
  const wfalab_status st = wfalab_experiment_run_json(text.c_str(), &ov, &summary, print_note, nullptr);
  return report(st, summary, dir);
}
