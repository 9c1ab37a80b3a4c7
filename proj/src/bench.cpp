#include "corebandit/bench.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "corebandit/agents.hpp"
#include "corebandit/baselines.hpp"
#include "corebandit/errors.hpp"

namespace corebandit {

std::vector<double> regret_curve(std::span<const double> gaps, std::span<const std::size_t> arms) {
  RegretAccumulator acc;
  std::vector<double> out;
  out.reserve(arms.size());
  for (const auto arm : arms) {
    acc.add_arm(gaps, arm);
    out.push_back(acc.value());
  }
  return out;
}

std::vector<std::size_t> logged_rounds(std::size_t horizon, std::size_t stride) {
  std::vector<std::size_t> rounds;
  for (std::size_t t = stride; t <= horizon; t += stride) rounds.push_back(t);
  if (rounds.empty() || rounds.back() != horizon) rounds.push_back(horizon);
  return rounds;
}

namespace {
// Domain tags keep the three seed families apart.
constexpr std::uint64_t kInstanceTag = 0x1157a9ce;
constexpr std::uint64_t kEnvTag = 0xe9f1a5b7;
}  // namespace

std::uint64_t instance_seed(std::uint64_t base, std::size_t instance) {
  return mix_seed({base, kInstanceTag, instance});
}

std::uint64_t environment_seed(std::uint64_t base, std::size_t instance, std::size_t run) {
  return mix_seed({base, kEnvTag, instance, run});
}

std::uint64_t agent_seed(std::uint64_t base, std::size_t instance, std::size_t agent, std::size_t run) {
  return mix_seed({base, instance, agent, run});
}

Problem make_problem(const RunConfig& config, std::size_t instance) {
  Problem problem;
  Rng rng(instance_seed(config.seed, instance));
  switch (config.experiment) {
    case ExperimentKind::kMab:
      problem.mab = generate_mab(config.env.num_arms, config.env.noise, rng);
      break;
    case ExperimentKind::kLinear:
      problem.linear = generate_linear(config.env.num_arms, config.env.dim, config.env.noise, rng);
      break;
    case ExperimentKind::kRanking:
      if (config.env.model_files.empty()) {
        problem.cascade = generate_cascade(config.env.num_items, config.env.list_length, rng);
      } else {
        problem.cascade = load_cascade_model(config.env.model_files.at(instance));
      }
      break;
  }
  return problem;
}

std::unique_ptr<BanditPolicy> make_bandit_policy(const AgentSpec& spec, const RunConfig& config,
                                                 const Problem& problem, std::uint64_t seed) {
  const auto& k = spec.kind;
  if (config.experiment == ExperimentKind::kMab) {
    const auto arms = problem.mab.num_arms();
    const auto& noise = problem.mab.noise;
    if (k == "core") {
      CoreParams p{spec.alpha, spec.z, spec.lambda, config.horizon};
      return std::make_unique<CoreAgent>(arms, p, seed);
    }
    if (k == "ucb1") return std::make_unique<Ucb1Agent>(arms);
    if (k == "ucbv") return std::make_unique<UcbVAgent>(arms, noise.range_bound());
    if (k == "ber-ts") return std::make_unique<BernoulliTsAgent>(arms, seed);
    if (k == "gauss-ts") {
      const double sigma = spec.sigma.value_or(noise.family == RewardFamily::kGaussian ? noise.gaussian_sd : 0.5);
      return std::make_unique<GaussianTsAgent>(arms, spec.prior_mean, sigma, seed);
    }
    if (k == "ber-phe") return std::make_unique<PheAgent>(arms, spec.a, PseudoFamily::kBernoulli, seed);
    if (k == "gauss-phe") {
      return std::make_unique<PheAgent>(arms, spec.a, PseudoFamily::kGaussian, seed, spec.pseudo_sd);
    }
  } else if (config.experiment == ExperimentKind::kLinear) {
    const auto& x = problem.linear.features;
    if (k == "lincore") {
      CoreParams p{spec.alpha, spec.z, spec.lambda, config.horizon, spec.ridge_mode};
      return std::make_unique<LinCoreAgent>(x, p, seed);
    }
    if (k == "linucb") return std::make_unique<LinUcbAgent>(x, spec.width, spec.lambda);
    if (k == "lints") return std::make_unique<LinTsAgent>(x, spec.sigma.value_or(1.0), spec.lambda, seed);
    if (k == "ber-linphe") return std::make_unique<LinPheAgent>(x, spec.a, PseudoFamily::kBernoulli, spec.lambda, seed);
    if (k == "gauss-linphe") {
      return std::make_unique<LinPheAgent>(x, spec.a, PseudoFamily::kGaussian, spec.lambda, seed);
    }
  }
  throw ConfigError("agents", "agent kind '" + k + "' is not a single-arm policy for " + to_string(config.experiment));
}

CascadeRanker make_ranker(const AgentSpec& spec, const RunConfig& config, const Problem& problem,
                          std::uint64_t seed) {
  RankerParams params;
  params.alpha = spec.alpha;
  params.z = spec.z;
  params.a = spec.a;
  params.horizon = config.horizon;
  if (spec.kind == "core") {
    params.kind = RankerKind::kCore;
  } else if (spec.kind == "klucb") {
    params.kind = RankerKind::kKlUcb;
  } else if (spec.kind == "ber-ts") {
    params.kind = RankerKind::kBernoulliTs;
  } else if (spec.kind == "ber-phe") {
    params.kind = RankerKind::kBernoulliPhe;
  } else {
    throw ConfigError("agents", "agent kind '" + spec.kind + "' cannot rank");
  }
  return CascadeRanker(problem.cascade.num_items(), problem.cascade.list_length, params, seed);
}

RunTrace run_single(const RunConfig& config, const Problem& problem, std::size_t instance, std::size_t agent_id,
                    std::size_t run) {
  const auto& spec = config.agents.at(agent_id);
  RunTrace trace;
  trace.agent = spec.name.empty() ? default_agent_name(spec, config.experiment) : spec.name;
  trace.agent_id = agent_id;
  trace.instance = instance;
  trace.run = run;
  trace.seed = agent_seed(config.seed, instance, agent_id, run);

  const auto rounds = logged_rounds(config.horizon, config.stride);
  trace.points.reserve(rounds.size());
  std::size_t next_log = 0;
  Rng env_rng(environment_seed(config.seed, instance, run));
  RegretAccumulator regret;
  double realized = 0.0;

  auto log_round = [&](std::size_t t) {
    if (next_log < rounds.size() && rounds[next_log] == t) {
      trace.points.push_back({t, regret.value()});
      if (config.log_realized) trace.realized.push_back(realized);
      ++next_log;
    }
  };

  if (config.experiment == ExperimentKind::kRanking) {
    const auto& instance_model = problem.cascade;
    const auto best = optimal_list(instance_model);
    const double best_clicks = cascade_expected_clicks(instance_model, best);
    auto ranker = make_ranker(spec, config, problem, trace.seed);
    for (std::size_t t = 1; t <= config.horizon; ++t) {
      const auto list = ranker.select(t);
      regret.add(std::max(0.0, best_clicks - cascade_expected_clicks(instance_model, list)));
      const auto feedback = cascade_step(instance_model, list, env_rng);
      if (feedback.click) realized += 1.0;
      ranker.observe(feedback);
      log_round(t);
    }
    return trace;
  }

  auto policy = make_bandit_policy(spec, config, problem, trace.seed);
  const bool linear = config.experiment == ExperimentKind::kLinear;
  const auto gap = linear ? gaps(problem.linear) : gaps(problem.mab);
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    const auto arm = policy->select(t);
    regret.add_arm(gap, arm);
    const double y = linear ? sample_reward(problem.linear, arm, env_rng) : sample_reward(problem.mab, arm, env_rng);
    realized += y;
    policy->observe(y);
    log_round(t);
  }
  return trace;
}

std::vector<AggregateRow> aggregate_traces(std::span<const RunTrace> traces) {
  std::vector<AggregateRow> rows;
  std::size_t begin = 0;
  while (begin < traces.size()) {
    std::size_t end = begin;
    while (end < traces.size() && traces[end].agent_id == traces[begin].agent_id) ++end;
    const auto group = traces.subspan(begin, end - begin);
    const std::size_t points = group.front().points.size();
    const double n = static_cast<double>(group.size());
    for (std::size_t j = 0; j < points; ++j) {
      double sum = 0.0;
      for (const auto& tr : group) sum += tr.points.at(j).cum_regret;
      const double mean = sum / n;
      double sq = 0.0;
      for (const auto& tr : group) {
        const double dev = tr.points[j].cum_regret - mean;
        sq += dev * dev;
      }
      const double sd = group.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
      rows.push_back({group.front().agent, group.front().points[j].round, mean, sd, group.size()});
    }
    begin = end;
  }
  return rows;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::size_t first_error_index = count;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (i < first_error_index) {
            first_error_index = i;
            first_error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ExperimentResult run_experiment(const RunConfig& config, std::size_t workers) {
  config.validate();
  if (workers == 0) workers = config.workers;

  std::vector<Problem> problems(config.instances);
  parallel_for(config.instances, workers, [&](std::size_t i) { problems[i] = make_problem(config, i); });

  const std::size_t per_agent = config.instances * config.runs;
  ExperimentResult result;
  result.traces.resize(config.agents.size() * per_agent);
  parallel_for(result.traces.size(), workers, [&](std::size_t job) {
    const std::size_t agent = job / per_agent;
    const std::size_t instance = (job % per_agent) / config.runs;
    const std::size_t run = job % config.runs;
    result.traces[job] = run_single(config, problems[instance], instance, agent, run);
  });
  result.aggregate = aggregate_traces(result.traces);
  return result;
}

std::vector<SweepCell> parameter_sweep(const RunConfig& config, std::size_t workers) {
  config.validate();
  if (!config.sweep) throw ConfigError("sweep", "missing sweep section");
  std::vector<SweepCell> cells;
  for (const double alpha : config.sweep->alpha) {
    for (const double z : config.sweep->z) {
      RunConfig cell = config;
      cell.sweep.reset();
      cell.agents = {config.agents.front()};
      cell.agents.front().alpha = alpha;
      cell.agents.front().z = z;
      cell.agents.front().name.clear();
      cell.stride = config.horizon;  // only the final regret is needed
      const auto result = run_experiment(cell, workers);
      const auto& last = result.aggregate.back();
      cells.push_back({alpha, z, last.mean_regret, last.std_regret, last.n_runs});
    }
  }
  return cells;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string traces_csv(std::span<const RunTrace> traces) {
  std::string out = "agent,instance,run,round,cum_regret\n";
  for (const auto& tr : traces) {
    const std::string prefix = csv_field(tr.agent) + "," + std::to_string(tr.instance) + "," + std::to_string(tr.run) + ",";
    for (const auto& p : tr.points) {
      out += prefix + std::to_string(p.round) + "," + format_double(p.cum_regret) + "\n";
    }
  }
  return out;
}

std::string aggregate_csv(std::span<const AggregateRow> rows) {
  std::string out = "agent,round,mean_regret,std_regret,n_runs\n";
  for (const auto& r : rows) {
    out += csv_field(r.agent) + "," + std::to_string(r.round) + "," + format_double(r.mean_regret) + "," +
           format_double(r.std_regret) + "," + std::to_string(r.n_runs) + "\n";
  }
  return out;
}

std::string runs_csv(std::span<const RunTrace> traces) {
  std::string out = "agent,instance,run,seed\n";
  for (const auto& tr : traces) {
    out += csv_field(tr.agent) + "," + std::to_string(tr.instance) + "," + std::to_string(tr.run) + "," +
           std::to_string(tr.seed) + "\n";
  }
  return out;
}

std::string realized_csv(std::span<const RunTrace> traces) {
  std::string out = "agent,instance,run,round,cum_reward\n";
  for (const auto& tr : traces) {
    const std::string prefix = csv_field(tr.agent) + "," + std::to_string(tr.instance) + "," + std::to_string(tr.run) + ",";
    for (std::size_t j = 0; j < tr.realized.size(); ++j) {
      out += prefix + std::to_string(tr.points[j].round) + "," + format_double(tr.realized[j]) + "\n";
    }
  }
  return out;
}

std::string sweep_csv(std::span<const SweepCell> cells) {
  std::string out = "alpha,z,mean_final_regret,std_final_regret,n_runs\n";
  for (const auto& c : cells) {
    out += format_double(c.alpha) + "," + format_double(c.z) + "," + format_double(c.mean_final_regret) + "," +
           format_double(c.std_final_regret) + "," + std::to_string(c.n_runs) + "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ExperimentResult run_and_write(const RunConfig& config, std::size_t workers) {
  auto result = run_experiment(config, workers);
  write_text_file(config.out_dir / "traces.csv", traces_csv(result.traces));
  write_text_file(config.out_dir / "aggregate.csv", aggregate_csv(result.aggregate));
  write_text_file(config.out_dir / "runs.csv", runs_csv(result.traces));
  if (config.log_realized) write_text_file(config.out_dir / "realized.csv", realized_csv(result.traces));
  return result;
}

std::vector<SweepCell> sweep_and_write(const RunConfig& config, std::size_t workers) {
  auto cells = parameter_sweep(config, workers);
  write_text_file(config.out_dir / "sweep.csv", sweep_csv(cells));
  return cells;
}

}  // namespace corebandit
