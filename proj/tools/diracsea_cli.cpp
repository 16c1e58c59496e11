// Command-line front end: one subcommand per experiment.
#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "diracsea/parallel.hpp"
#include "diracsea/runner.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kBudget = 3, kConditioning = 4 };

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  unsigned threads = 0;
  std::optional<std::size_t> dense_budget;
};

int run(const std::string& experiment, const Options& opt) {
  using namespace diracsea;
  // Flags are applied after --set so they win over both the file and --set.
  std::vector<std::string> overrides = opt.overrides;
  if (opt.seed) overrides.push_back("seed=" + std::to_string(*opt.seed));
  overrides.push_back("experiment=\"" + experiment + "\"");

  ScenarioConfig config = load_scenario(opt.config, overrides);
  if (opt.dense_budget) config.evolution.dense_budget = *opt.dense_budget;
  const unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  set_default_threads(threads);

  const auto start = std::chrono::steady_clock::now();
  const RunOutput out = run_experiment(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_artifacts(config, out, opt.out, wall, threads);
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << opt.out << "/results.csv (" << wall << " s)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac sea dynamics on a momentum lattice"};
  app.require_subcommand(1);
  Options opt;
  std::string chosen;
  for (const char* name : {"spectrum", "evolve", "scan", "qnorm", "lift", "gauge", "wedge-suite"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", opt.config, "scenario JSON file");
    sub->add_option("--set", opt.overrides, "override KEY=VALUE with a dotted key, repeatable")
        ->allow_extra_args(false);
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("-o,--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("-j,--threads", opt.threads, "worker threads (0 = hardware)");
    sub->add_option("--dense-budget", opt.dense_budget, "byte limit for dense operators");
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    return run(chosen, opt);
  } catch (const diracsea::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const diracsea::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const diracsea::IllConditionedTruncation& e) {
    std::cerr << e.what() << '\n';
    return kConditioning;
  } catch (const diracsea::ChargeObstruction& e) {
    std::cerr << e.what() << '\n';
    return kConditioning;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
