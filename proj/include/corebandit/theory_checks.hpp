#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace corebandit {

/// One row of check_report.csv.
struct CheckReport {
  std::string check;
  std::string params;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double bound = 0.0;      // claimed bound (check-specific, see each function)
  double empirical = 0.0;  // observed statistic
  bool pass = false;
};

/// Binomial 3-SE slack around a nominal failure probability p.
double binomial_slack(double p, std::size_t trials);

/// Pool-variance floor. Each trial draws K = 10 arm means from U[0, 1] and a
/// stream of n - 1 Gaussian rewards (sd sigma) from uniformly chosen arms.
/// For every round t past 4 ln n / (z - 1 - ln z) + 1 the pool of the first
/// t - 1 rewards is built; the trial fails if any of them has variance below
/// alpha^2 z sigma^2 / 2. bound = 1/n, empirical = failure rate, pass iff
/// empirical <= 1/n + binomial_slack(1/n, trials).
CheckReport check_lemma1(std::size_t n, double z, double alpha, double sigma, std::size_t trials,
                         std::uint64_t seed, std::size_t workers = 1);

/// Pool magnitude. Same reward streams; a trial fails if any pool built for
/// t <= n holds a value with |value| > alpha (4 sqrt(sigma^2 ln n) + 1).
CheckReport check_lemma2(std::size_t n, double alpha, double sigma, std::size_t trials, std::uint64_t seed,
                         std::size_t workers = 1);

/// The magnitude bound used by check_lemma2.
double lemma2_bound(std::size_t n, double alpha, double sigma);

/// Shifted ellipsoidal Gaussian. X = A Z with Z standard normal in R^d.
/// bound = P(|X|^2 <= eps^2), empirical = P(|X + v|^2 <= eps^2), both from
/// paired draws; failures counts draws landing in the shifted ball.
/// Pass iff empirical <= bound + 3 combined standard errors.
CheckReport check_chi_square_shift(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double eps,
                                   std::size_t trials, std::uint64_t seed);

/// Perturb-and-average sampler (mu0 + Z_0 + sum_l (Y_l + Z_l)) / (s + 1) with
/// Z ~ N(0, sigma^2) against the Gaussian posterior N((mu0 + sum Y)/(s+1), sigma^2/(s+1)).
/// The Gaussian TS sampler used by the agents is tested against the same
/// target. empirical = largest |z-score| over means and variances, bound = 4.
CheckReport check_posterior_equivalence(double mu0, double sigma, std::span<const double> rewards,
                                        std::size_t trials, std::uint64_t seed);

/// Anti-concentration for X ~ N(0, sigma^2) taken as sigma^2-sub-Gaussian:
/// P(|X| > w) > (sigma^2 - w^2 - 4 sigma^2 exp(-y^2 / (2 sigma^2))) / y^2 for 0 < w < y.
/// bound = right side, empirical = Monte Carlo left side; pass iff empirical
/// plus 3 SE exceeds the bound.
CheckReport check_anti_concentration(double sigma, double w, double y, std::size_t trials, std::uint64_t seed);

/// The battery behind the `check` subcommand.
std::vector<CheckReport> run_default_checks(std::uint64_t seed, std::size_t workers = 1);

std::string check_report_csv(std::span<const CheckReport> reports);
void write_check_report(std::span<const CheckReport> reports, const std::filesystem::path& path);

}  // namespace corebandit
