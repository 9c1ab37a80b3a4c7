#include "corebandit/theory_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corebandit/bench.hpp"
#include "corebandit/errors.hpp"
#include "corebandit/reward_pool.hpp"
#include "corebandit/rng.hpp"

namespace corebandit {

namespace {

constexpr std::size_t kCheckArms = 10;

std::string join_params(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

// n - 1 rewards from a K-armed Gaussian bandit with arms picked uniformly.
std::vector<double> mixed_stream(std::size_t n, double sigma, Rng& rng) {
  std::vector<double> means(kCheckArms);
  for (auto& m : means) m = rng.uniform();
  std::vector<double> rewards(n > 0 ? n - 1 : 0);
  for (auto& y : rewards) y = means[rng.index(kCheckArms)] + sigma * rng.normal();
  return rewards;
}

CheckReport rate_report(std::string name, std::string params, std::size_t n, std::size_t trials,
                        std::size_t failures) {
  CheckReport r;
  r.check = std::move(name);
  r.params = std::move(params);
  r.trials = trials;
  r.failures = failures;
  r.bound = 1.0 / static_cast<double>(n);
  r.empirical = static_cast<double>(failures) / static_cast<double>(trials);
  r.pass = r.empirical <= r.bound + binomial_slack(r.bound, trials);
  return r;
}

void require_trials(std::size_t trials, std::size_t minimum, const char* what) {
  if (trials < minimum) throw ParameterError(std::string(what) + " needs at least " + std::to_string(minimum) + " trials");
}

}  // namespace

double binomial_slack(double p, std::size_t trials) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

CheckReport check_lemma1(std::size_t n, double z, double alpha, double sigma, std::size_t trials,
                         std::uint64_t seed, std::size_t workers) {
  if (n < 2) throw ParameterError("lemma1 check needs n >= 2");
  if (!(z > 0.0 && z < 1.0)) throw ParameterError("z must lie in (0, 1)");
  if (!(alpha > 0.0) || sigma < 0.0) throw ParameterError("alpha must be positive and sigma non-negative");
  require_trials(trials, 1, "lemma1 check");

  const double threshold = 4.0 * std::log(static_cast<double>(n)) / (z - 1.0 - std::log(z)) + 1.0;
  const double floor_value = alpha * alpha * z * sigma * sigma / 2.0;
  std::vector<char> failed(trials, 0);
  parallel_for(trials, workers, [&](std::size_t trial) {
    Rng rng(mix_seed({seed, trial}));
    const auto rewards = mixed_stream(n, sigma, rng);
    RewardPool pool;
    for (std::size_t t = 2; t <= n; ++t) {
      if (static_cast<double>(t) <= threshold) continue;
      pool.rebuild(std::span<const double>(rewards).first(t - 1), alpha);
      if (pool_variance(pool) < floor_value) {
        failed[trial] = 1;
        return;
      }
    }
  });
  const auto failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  return rate_report("lemma1_pool_variance",
                     join_params({{"n", std::to_string(n)}, {"z", format_double(z)}, {"alpha", format_double(alpha)},
                                  {"sigma", format_double(sigma)}}),
                     n, trials, failures);
}

double lemma2_bound(std::size_t n, double alpha, double sigma) {
  return alpha * (4.0 * std::sqrt(sigma * sigma * std::log(static_cast<double>(n))) + 1.0);
}

CheckReport check_lemma2(std::size_t n, double alpha, double sigma, std::size_t trials, std::uint64_t seed,
                         std::size_t workers) {
  if (n < 2) throw ParameterError("lemma2 check needs n >= 2");
  if (!(alpha > 0.0) || sigma < 0.0) throw ParameterError("alpha must be positive and sigma non-negative");
  require_trials(trials, 1, "lemma2 check");

  const double limit = lemma2_bound(n, alpha, sigma);
  std::vector<char> failed(trials, 0);
  parallel_for(trials, workers, [&](std::size_t trial) {
    Rng rng(mix_seed({seed, trial}));
    const auto rewards = mixed_stream(n, sigma, rng);
    RewardPool pool;
    for (std::size_t t = 2; t <= n; ++t) {
      pool.rebuild(std::span<const double>(rewards).first(t - 1), alpha);
      for (const double v : pool.values()) {
        if (std::abs(v) > limit) {
          failed[trial] = 1;
          return;
        }
      }
    }
  });
  const auto failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  return rate_report("lemma2_pool_magnitude",
                     join_params({{"n", std::to_string(n)}, {"alpha", format_double(alpha)},
                                  {"sigma", format_double(sigma)}}),
                     n, trials, failures);
}

CheckReport check_chi_square_shift(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double eps,
                                   std::size_t trials, std::uint64_t seed) {
  if (a.rows() != a.cols() || a.rows() != v.size() || a.rows() == 0) {
    throw ParameterError("chi-square check needs a square A matching v");
  }
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  require_trials(trials, 1, "chi-square check");

  const auto d = a.rows();
  Rng rng(seed);
  Eigen::VectorXd zv(d);
  std::size_t inside_left = 0;
  std::size_t inside_right = 0;
  const double eps2 = eps * eps;
  for (std::size_t i = 0; i < trials; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) zv[j] = rng.normal();
    const Eigen::VectorXd x = a * zv;
    if (x.squaredNorm() <= eps2) ++inside_left;
    if ((x + v).squaredNorm() <= eps2) ++inside_right;
  }
  const double m = static_cast<double>(trials);
  const double pl = static_cast<double>(inside_left) / m;
  const double pr = static_cast<double>(inside_right) / m;
  const double se = std::sqrt(pl * (1.0 - pl) / m + pr * (1.0 - pr) / m);

  CheckReport r;
  r.check = "chi_square_shift";
  r.params = join_params({{"d", std::to_string(d)}, {"eps", format_double(eps)}, {"norm_v", format_double(v.norm())}});
  r.trials = trials;
  r.failures = inside_right;
  r.bound = pl;
  r.empirical = pr;
  r.pass = pr <= pl + 3.0 * se;
  return r;
}

CheckReport check_posterior_equivalence(double mu0, double sigma, std::span<const double> rewards,
                                        std::size_t trials, std::uint64_t seed) {
  if (sigma < 0.0) throw ParameterError("sigma must be non-negative");
  require_trials(trials, 2, "posterior check");

  const double s = static_cast<double>(rewards.size());
  double total = 0.0;
  for (const double y : rewards) total += y;
  const double target_mean = (mu0 + total) / (s + 1.0);
  const double target_var = sigma * sigma / (s + 1.0);

  Rng rng(seed);
  const double m = static_cast<double>(trials);
  // Running moments of both samplers.
  double sum_pa = 0.0, sq_pa = 0.0, sum_ts = 0.0, sq_ts = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    double acc = mu0 + sigma * rng.normal();
    for (const double y : rewards) acc += y + sigma * rng.normal();
    const double pa = acc / (s + 1.0);
    sum_pa += pa;
    sq_pa += pa * pa;
  }
  for (std::size_t i = 0; i < trials; ++i) {
    const double ts = rng.normal(target_mean, std::sqrt(target_var));
    sum_ts += ts;
    sq_ts += ts * ts;
  }

  auto z_scores = [&](double sum, double sq) {
    const double mean = sum / m;
    const double var = std::max(0.0, (sq - m * mean * mean) / (m - 1.0));
    double zm = 0.0;
    double zv = 0.0;
    if (target_var > 0.0) {
      zm = std::abs(mean - target_mean) / std::sqrt(target_var / m);
      zv = std::abs(var - target_var) / (target_var * std::sqrt(2.0 / (m - 1.0)));
    } else {
      // Degenerate posterior: both samplers must be exactly constant up to rounding.
      const double tol = 1e-12 * std::max(1.0, std::abs(target_mean));
      zm = std::abs(mean - target_mean) <= tol ? 0.0 : std::numeric_limits<double>::infinity();
      zv = var <= tol ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::max(zm, zv);
  };

  CheckReport r;
  r.check = "posterior_equivalence";
  r.params = join_params({{"mu0", format_double(mu0)}, {"sigma", format_double(sigma)},
                          {"s", std::to_string(rewards.size())}, {"sum_y", format_double(total)}});
  r.trials = trials;
  r.bound = 4.0;
  r.empirical = std::max(z_scores(sum_pa, sq_pa), z_scores(sum_ts, sq_ts));
  r.failures = r.empirical > r.bound ? 1 : 0;
  r.pass = r.empirical <= r.bound;
  return r;
}

CheckReport check_anti_concentration(double sigma, double w, double y, std::size_t trials, std::uint64_t seed) {
  if (!(sigma > 0.0) || !(w > 0.0) || !(y > w)) throw ParameterError("need sigma > 0 and 0 < w < y");
  require_trials(trials, 1, "anti-concentration check");

  const double s2 = sigma * sigma;
  const double rhs = (s2 - w * w - 4.0 * s2 * std::exp(-y * y / (2.0 * s2))) / (y * y);
  Rng rng(seed);
  std::size_t beyond = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    if (std::abs(sigma * rng.normal()) > w) ++beyond;
  }
  const double m = static_cast<double>(trials);
  const double p = static_cast<double>(beyond) / m;

  CheckReport r;
  r.check = "anti_concentration";
  r.params = join_params({{"sigma", format_double(sigma)}, {"w", format_double(w)}, {"y", format_double(y)}});
  r.trials = trials;
  r.failures = beyond;
  r.bound = rhs;
  r.empirical = p;
  r.pass = p + 3.0 * std::sqrt(p * (1.0 - p) / m) > rhs;
  return r;
}

std::vector<CheckReport> run_default_checks(std::uint64_t seed, std::size_t workers) {
  std::vector<CheckReport> out;
  out.push_back(check_lemma1(1000, 0.6, 1.0, 0.5, 2000, mix_seed({seed, 1}), workers));
  out.push_back(check_lemma2(1000, 1.0, 0.5, 2000, mix_seed({seed, 2}), workers));

  Eigen::MatrixXd a1 = Eigen::MatrixXd::Identity(1, 1);
  Eigen::VectorXd v1(1);
  v1 << 2.0;
  out.push_back(check_chi_square_shift(a1, v1, 1.0, 100000, mix_seed({seed, 3})));

  Rng rng(mix_seed({seed, 4}));
  Eigen::MatrixXd a3(3, 3);
  Eigen::VectorXd v3(3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    v3[i] = rng.normal();
    for (Eigen::Index j = 0; j < 3; ++j) a3(i, j) = rng.normal();
  }
  out.push_back(check_chi_square_shift(a3, v3, 1.0, 100000, mix_seed({seed, 5})));

  const std::vector<double> ys{1.0, 0.0, 1.0};
  out.push_back(check_posterior_equivalence(0.5, 0.5, ys, 100000, mix_seed({seed, 6})));
  out.push_back(check_anti_concentration(1.0, 0.5, 2.0, 100000, mix_seed({seed, 7})));
  return out;
}

std::string check_report_csv(std::span<const CheckReport> reports) {
  std::string out = "check,params,trials,failures,bound,empirical,pass\n";
  for (const auto& r : reports) {
    out += csv_field(r.check) + "," + csv_field(r.params) + "," + std::to_string(r.trials) + "," + std::to_string(r.failures) + "," +
           format_double(r.bound) + "," + format_double(r.empirical) + "," + (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

void write_check_report(std::span<const CheckReport> reports, const std::filesystem::path& path) {
  write_text_file(path, check_report_csv(reports));
}

}  // namespace corebandit
