// corebandit command-line front end.
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "corebandit/bench.hpp"
#include "corebandit/config.hpp"
#include "corebandit/envs.hpp"
#include "corebandit/errors.hpp"
#include "corebandit/rng.hpp"
#include "corebandit/theory_checks.hpp"

namespace cb = corebandit;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> stride;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Base seed (overrides the config)");
  cmd->add_option("--out", o.out, "Output directory (overrides the config)");
  cmd->add_option("--workers", o.workers, "Worker threads, 0 = hardware concurrency");
  cmd->add_option("--stride", o.stride, "Trace logging stride in rounds")->check(CLI::PositiveNumber);
}

cb::RunConfig load_with_overrides(const std::string& path, const Overrides& o) {
  auto config = cb::load_config(path);
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.out_dir = *o.out;
  if (o.workers) config.workers = *o.workers;
  if (o.stride) config.stride = *o.stride;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized-exploration bandit simulator and benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config and write regret traces");
  run_cmd->add_option("config", config_path, "YAML experiment config")->required()->check(CLI::ExistingFile);
  add_overrides(run_cmd, run_opts);

  Overrides sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Final-regret grid over alpha x z for the first agent");
  sweep_cmd->add_option("config", config_path, "YAML experiment config with a sweep section")
      ->required()
      ->check(CLI::ExistingFile);
  add_overrides(sweep_cmd, sweep_opts);

  std::uint64_t check_seed = 0;
  std::string check_out = "out";
  std::size_t check_workers = 0;
  auto* check_cmd = app.add_subcommand("check", "Monte Carlo checks of the reward-pool lemmas");
  check_cmd->add_option("--seed", check_seed, "Base seed");
  check_cmd->add_option("--out", check_out, "Directory for check_report.csv");
  check_cmd->add_option("--workers", check_workers, "Worker threads, 0 = hardware concurrency");

  std::size_t gen_items = 10;
  std::size_t gen_list = 5;
  std::size_t gen_count = 10;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "models";
  auto* gen_cmd = app.add_subcommand("gen-cascade", "Write synthetic cascade model files");
  gen_cmd->add_option("--items,-L", gen_items, "Items per query")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--list,-K", gen_list, "List length")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--count", gen_count, "Number of query files")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_seed, "Seed");
  gen_cmd->add_option("--out", gen_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto config = load_with_overrides(config_path, run_opts);
      const auto result = cb::run_and_write(config, config.workers);
      for (const auto& row : result.aggregate) {
        if (row.round == config.horizon) {
          std::cout << row.agent << ": mean regret " << cb::format_double(row.mean_regret) << " (sd "
                    << cb::format_double(row.std_regret) << ", " << row.n_runs << " runs)\n";
        }
      }
      std::cout << "wrote " << (config.out_dir / "aggregate.csv").string() << "\n";
    } else if (*sweep_cmd) {
      const auto config = load_with_overrides(config_path, sweep_opts);
      const auto cells = cb::sweep_and_write(config, config.workers);
      std::cout << cb::sweep_csv(cells);
    } else if (*check_cmd) {
      const auto reports = cb::run_default_checks(check_seed, check_workers);
      const std::filesystem::path path = std::filesystem::path(check_out) / "check_report.csv";
      cb::write_check_report(reports, path);
      std::cout << cb::check_report_csv(reports);
      bool ok = true;
      for (const auto& r : reports) ok = ok && r.pass;
      return ok ? 0 : 1;
    } else if (*gen_cmd) {
      if (gen_list > gen_items) throw cb::ParameterError("list length exceeds item count");
      for (std::size_t q = 0; q < gen_count; ++q) {
        cb::Rng rng(cb::mix_seed({gen_seed, q}));
        const auto model = cb::generate_cascade(gen_items, gen_list, rng);
        const auto path = std::filesystem::path(gen_out) / ("query_" + std::to_string(q) + ".cm");
        std::filesystem::create_directories(path.parent_path());
        cb::save_cascade_model(model, path);
      }
      std::cout << "wrote " << gen_count << " models to " << gen_out << "\n";
    }
  } catch (const cb::ConfigError& e) {
    std::cerr << "config error at '" << e.path() << "': " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
