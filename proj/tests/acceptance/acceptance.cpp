// Acceptance criteria. One PASS/FAIL line per criterion; exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "corebandit/agents.hpp"
#include "corebandit/bench.hpp"
#include "corebandit/envs.hpp"
#include "corebandit/theory_checks.hpp"

using namespace corebandit;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d %s: %s; %.1fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              out.detail.c_str(), secs, limit_seconds, in_time ? "" : " TIMEOUT");
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

AgentSpec agent(const std::string& kind) {
  AgentSpec a;
  a.kind = kind;
  return a;
}

// Mean final regret per agent label.
std::map<std::string, double> final_means(const ExperimentResult& res, std::size_t horizon) {
  std::map<std::string, double> out;
  for (const auto& row : res.aggregate) {
    if (row.round == horizon) out[row.agent] = row.mean_regret;
  }
  return out;
}

RunConfig mab_config(RewardFamily family, std::size_t horizon, std::uint64_t seed) {
  RunConfig cfg;
  cfg.experiment = ExperimentKind::kMab;
  cfg.env.noise.family = family;
  cfg.env.num_arms = 10;
  cfg.agents = {agent("core"), agent("ucb1"), agent("ucbv")};
  cfg.horizon = horizon;
  cfg.instances = 20;
  cfg.runs = 1;
  cfg.seed = seed;
  cfg.stride = horizon;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string unit_binary = argc > 1 ? argv[1] : "";
  const std::size_t workers = 0;

  report(1, "pool variance floor (n=1000, z=0.6, alpha=1, sigma=0.5, 2000 trials)", 120, [&] {
    const auto r = check_lemma1(1000, 0.6, 1.0, 0.5, 2000, 1001, workers);
    return Outcome{r.pass, "failure rate " + fmt(r.empirical) + " vs 1/n + 3SE = " +
                               fmt(r.bound + binomial_slack(r.bound, r.trials))};
  });

  report(2, "pool magnitude bound (n=1000, alpha=1, sigma=0.5, 2000 trials)", 60, [&] {
    const auto r = check_lemma2(1000, 1.0, 0.5, 2000, 1002, workers);
    return Outcome{r.pass, "failure rate " + fmt(r.empirical) + " vs 1/n + 3SE = " +
                               fmt(r.bound + binomial_slack(r.bound, r.trials))};
  });

  report(3, "perturb-and-average equals Gaussian posterior (10 settings, 1e5 draws, 4 SE)", 120, [&] {
    Rng rng(1003);
    double worst = 0.0;
    bool ok = true;
    for (int k = 0; k < 10; ++k) {
      const double mu0 = rng.uniform();
      const double sigma = rng.uniform(0.1, 2.0);
      const std::size_t s = rng.index(21);
      std::vector<double> y(s);
      for (auto& v : y) v = rng.uniform();
      const auto r = check_posterior_equivalence(mu0, sigma, y, 100000, rng.next_u64());
      worst = std::max(worst, r.empirical);
      ok = ok && r.pass;
    }
    return Outcome{ok, "largest |z| " + fmt(worst) + " (limit 4)"};
  });

  report(4, "one-hot LinCORe (lambda=0) reproduces CORe arm sequence (n=500, 20 seeds)", 120, [&] {
    const std::size_t k = 10, n = 500;
    std::size_t mismatched_seeds = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng gen(mix_seed({1004, seed}));
      const auto inst = generate_mab(k, NoiseModel::gaussian(0.5), gen);
      CoreParams p;
      p.horizon = n;
      p.lambda = 0.0;
      p.allow_zero_ridge = true;
      CoreAgent core(k, p, seed);
      LinCoreAgent lin(Eigen::MatrixXd::Identity(k, k), p, seed);
      Rng env_a(seed + 77), env_b(seed + 77);
      bool same = true;
      for (std::size_t t = 1; t <= n; ++t) {
        const auto a = core.select(t);
        const auto b = lin.select(t);
        same = same && a == b;
        core.observe(sample_reward(inst, a, env_a));
        lin.observe(sample_reward(inst, b, env_b));
      }
      mismatched_seeds += same ? 0 : 1;
    }
    return Outcome{mismatched_seeds == 0, std::to_string(20 - mismatched_seeds) + "/20 seeds identical"};
  });

  double gaussian_r10k = 0.0;
  report(5, "CORe below UCB1 and UCB-V on Bernoulli, Beta, Gaussian MAB (K=10, n=1e4, 20 instances)", 300, [&] {
    bool ok = true;
    std::string detail;
    const std::pair<RewardFamily, const char*> families[] = {
        {RewardFamily::kBernoulli, "Bernoulli"}, {RewardFamily::kBeta, "Beta"}, {RewardFamily::kGaussian, "Gaussian"}};
    std::uint64_t seed = 1005;
    for (const auto& [family, label] : families) {
      const auto cfg = mab_config(family, 10000, seed++);
      const auto m = final_means(run_experiment(cfg, workers), 10000);
      const double core = m.at("CORe(alpha=0.6,z=0.6)"), ucb1 = m.at("UCB1"), ucbv = m.at("UCB-V");
      ok = ok && core < ucb1 && core < ucbv;
      if (family == RewardFamily::kGaussian) gaussian_r10k = core;
      detail += std::string(detail.empty() ? "" : "; ") + label + " CORe " + fmt(core) + " UCB1 " + fmt(ucb1) +
                " UCB-V " + fmt(ucbv);
    }
    return Outcome{ok, detail};
  });

  report(6, "sublinear regret: R(10000) < 1.9 R(5000) on Gaussian MAB", 120, [&] {
    // Same instances and seeds as the Gaussian run above, at the shorter horizon.
    auto cfg = mab_config(RewardFamily::kGaussian, 5000, 1007);
    cfg.agents = {agent("core")};
    const double r5k = final_means(run_experiment(cfg, workers), 5000).at("CORe(alpha=0.6,z=0.6)");
    const double ratio = gaussian_r10k / r5k;
    return Outcome{gaussian_r10k > 0.0 && ratio < 1.9,
                   "R(10000) " + fmt(gaussian_r10k) + " / R(5000) " + fmt(r5k) + " = " + fmt(ratio)};
  });

  report(7, "linear adaptation (K=50, d=10, n=5000, 10 instances, noise sd 0.2 and 1.0)", 900, [&] {
    // LinTS tuned per problem: sigma_TS = 0.2 on the easy problem, 1.0 on the hard one.
    std::map<double, std::map<std::string, double>> by_noise;
    std::uint64_t seed = 1008;
    for (const double sd : {0.2, 1.0}) {
      RunConfig cfg;
      cfg.experiment = ExperimentKind::kLinear;
      cfg.env.noise = NoiseModel::gaussian(sd);
      cfg.env.num_arms = 50;
      cfg.env.dim = 10;
      cfg.agents = {agent("lincore")};
      for (const double s : {0.2, 1.0}) {
        auto a = agent("lints");
        a.sigma = s;
        cfg.agents.push_back(a);
      }
      cfg.horizon = 5000;
      cfg.instances = 10;
      cfg.seed = seed++;
      cfg.stride = 5000;
      by_noise[sd] = final_means(run_experiment(cfg, workers), 5000);
    }
    auto lints = [&](double sd, double s) { return by_noise[sd].at("LinTS(sigma=" + format_double(s) + ")"); };
    const double core_easy = by_noise[0.2].at("LinCORe(alpha=0.6,z=0.6)");
    const double core_hard = by_noise[1.0].at("LinCORe(alpha=0.6,z=0.6)");
    const bool within_easy = core_easy <= 2.0 * lints(0.2, 0.2);
    const bool within_hard = core_hard <= 2.0 * lints(1.0, 1.0);
    const double mistuned_ratio = lints(1.0, 0.2) / lints(1.0, 1.0);
    const bool mistuned = mistuned_ratio > 3.0;
    return Outcome{within_easy && within_hard && mistuned,
                   "easy: LinCORe " + fmt(core_easy) + " vs LinTS(0.2) " + fmt(lints(0.2, 0.2)) +
                       (within_easy ? " ok" : " FAIL") + "; hard: LinCORe " + fmt(core_hard) + " vs LinTS(1.0) " +
                       fmt(lints(1.0, 1.0)) + (within_hard ? " ok" : " FAIL") + "; hard LinTS(0.2)/LinTS(1.0) = " +
                       fmt(mistuned_ratio) + (mistuned ? " > 3 ok" : " <= 3 FAIL")};
  });

  report(8, "cascade ranking: CORe <= CascadeKL-UCB (L=10, K=5, n=20000, 10 queries)", 600, [&] {
    RunConfig cfg;
    cfg.experiment = ExperimentKind::kRanking;
    cfg.env.num_items = 10;
    cfg.env.list_length = 5;
    cfg.agents = {agent("core"), agent("klucb")};
    cfg.horizon = 20000;
    cfg.instances = 10;
    cfg.seed = 1009;
    cfg.stride = 20000;
    const auto m = final_means(run_experiment(cfg, workers), 20000);
    const double core = m.at("CORe(alpha=0.6,z=0.6)"), kl = m.at("CascadeKL-UCB");
    return Outcome{core <= kl, "CORe " + fmt(core) + " CascadeKL-UCB " + fmt(kl)};
  });

  report(9, "property suite (unit tests)", 60, [&] {
    if (unit_binary.empty()) return Outcome{false, "unit test binary path not given"};
    const std::string cmd = "\"" + unit_binary + "\" --minimal > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return Outcome{rc == 0, rc == 0 ? "all unit and property tests passed" : "unit tests failed"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
