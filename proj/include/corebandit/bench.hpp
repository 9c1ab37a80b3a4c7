#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "corebandit/config.hpp"
#include "corebandit/envs.hpp"
#include "corebandit/policy.hpp"
#include "corebandit/ranking.hpp"

namespace corebandit {

/// Running sum of expected per-round loss.
class RegretAccumulator {
 public:
  /// Adds the gap of `arm`.
  void add_arm(std::span<const double> gaps, std::size_t arm) { total_ += gaps[arm]; }
  /// Adds the expected loss of a ranked list.
  void add_list(const CascadeInstance& instance, std::span<const std::size_t> list) {
    total_ += ranking_regret(instance, list);
  }
  void add(double loss) { total_ += loss; }
  double value() const { return total_; }

 private:
  double total_ = 0.0;
};

/// Cumulative regret after each round for a fixed arm sequence (0-based arms).
std::vector<double> regret_curve(std::span<const double> gaps, std::span<const std::size_t> arms);

struct TracePoint {
  std::size_t round;
  double cum_regret;
};

struct RunTrace {
  std::string agent;
  std::size_t agent_id = 0;
  std::size_t instance = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::vector<TracePoint> points;
  std::vector<double> realized;  // cumulative realized reward at the same rounds, if requested

  double final_regret() const { return points.empty() ? 0.0 : points.back().cum_regret; }
};

struct AggregateRow {
  std::string agent;
  std::size_t round;
  double mean_regret;
  double std_regret;  // sample standard deviation over all (instance, run) pairs; 0 for a single run
  std::size_t n_runs;
};

struct ExperimentResult {
  std::vector<RunTrace> traces;  // ordered by (agent, instance, run)
  std::vector<AggregateRow> aggregate;
};

struct SweepCell {
  double alpha;
  double z;
  double mean_final_regret;
  double std_final_regret;
  std::size_t n_runs;
};

/// Rounds written to traces: stride, 2 stride, ..., and always n.
std::vector<std::size_t> logged_rounds(std::size_t horizon, std::size_t stride);

// Seed derivation. All values are fed through mix_seed() in the listed order.
std::uint64_t instance_seed(std::uint64_t base, std::size_t instance);
std::uint64_t environment_seed(std::uint64_t base, std::size_t instance, std::size_t run);
std::uint64_t agent_seed(std::uint64_t base, std::size_t instance, std::size_t agent, std::size_t run);

/// Concrete problem for one instance index.
struct Problem {
  MabInstance mab;
  LinearInstance linear;
  CascadeInstance cascade;
};

Problem make_problem(const RunConfig& config, std::size_t instance);

std::unique_ptr<BanditPolicy> make_bandit_policy(const AgentSpec& spec, const RunConfig& config,
                                                 const Problem& problem, std::uint64_t seed);
CascadeRanker make_ranker(const AgentSpec& spec, const RunConfig& config, const Problem& problem,
                          std::uint64_t seed);

/// One full agent-environment loop.
RunTrace run_single(const RunConfig& config, const Problem& problem, std::size_t instance, std::size_t agent_id,
                    std::size_t run);

/// Mean and sample standard deviation per (agent, logged round), accumulating
/// traces in (instance, run) order.
std::vector<AggregateRow> aggregate_traces(std::span<const RunTrace> traces);

/// Runs every (agent, instance, run) triple on `workers` threads (0 = config.workers,
/// which in turn defaults to the hardware concurrency). No files are written.
ExperimentResult run_experiment(const RunConfig& config, std::size_t workers = 0);

/// Final-regret table over the alpha x z grid of config.sweep for agents[0].
/// Each cell is a standalone single-agent experiment with agent id 0.
std::vector<SweepCell> parameter_sweep(const RunConfig& config, std::size_t workers = 0);

/// Runs `count` jobs on a worker pool; job i must only touch its own outputs.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job);

// ---- output ---------------------------------------------------------------

/// RFC 4180 quoting for fields holding commas, quotes or line breaks.
std::string csv_field(const std::string& text);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

std::string traces_csv(std::span<const RunTrace> traces);        // agent,instance,run,round,cum_regret
std::string aggregate_csv(std::span<const AggregateRow> rows);   // agent,round,mean_regret,std_regret,n_runs
std::string runs_csv(std::span<const RunTrace> traces);          // agent,instance,run,seed
std::string realized_csv(std::span<const RunTrace> traces);      // agent,instance,run,round,cum_reward
std::string sweep_csv(std::span<const SweepCell> cells);         // alpha,z,mean_final_regret,std_final_regret,n_runs

void write_text_file(const std::filesystem::path& path, const std::string& text);

/// run_experiment() plus traces.csv, aggregate.csv and runs.csv (and realized.csv) in config.out_dir.
ExperimentResult run_and_write(const RunConfig& config, std::size_t workers = 0);

/// parameter_sweep() plus sweep.csv in config.out_dir.
std::vector<SweepCell> sweep_and_write(const RunConfig& config, std::size_t workers = 0);

}  // namespace corebandit
