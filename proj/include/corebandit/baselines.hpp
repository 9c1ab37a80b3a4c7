#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corebandit/agents.hpp"
#include "corebandit/policy.hpp"
#include "corebandit/rng.hpp"

namespace corebandit {

// ---- index and sampling primitives ---------------------------------------

/// mean + sqrt(2 ln t / s); +infinity when s == 0.
double ucb1_index(double mean, std::size_t pulls, std::size_t round);

/// mean + sqrt(2 V ln t / s) + 3 b ln t / s; +infinity when s == 0.
double ucbv_index(double mean, double emp_var, std::size_t pulls, std::size_t round, double range_bound);

/// Draw from the Beta(1 + successes, 1 + failures) posterior.
double bern_ts_sample(double successes, double failures, Rng& rng);

/// Draw from N((mu0 + V) / (s + 1), sigma^2 / (s + 1)).
double gauss_ts_sample(double prior_mean, double sigma, double total, std::size_t pulls, Rng& rng);

enum class PseudoFamily { kBernoulli, kGaussian };

/// ceil(a s) pseudo rewards, guarded against a*s landing one ulp above an integer.
std::size_t phe_pseudo_count(double a, std::size_t pulls);

/// (V + sum pseudo) / (s + |pseudo|).
double phe_estimate(double total, std::size_t pulls, std::span<const double> pseudo);

/// Ber-PHE draws pseudo rewards from Ber(1/2); Gauss-PHE from N(1/2, pseudo_sd^2).
double phe_estimate(double total, std::size_t pulls, double a, PseudoFamily family, Rng& rng,
                    double pseudo_sd = 0.5);

// ---- multi-armed baselines ------------------------------------------------

/// Per-arm sufficient statistics shared by the multi-armed baselines.
struct ArmStats {
  std::vector<std::size_t> pulls;
  std::vector<double> totals;
  std::vector<double> squares;

  explicit ArmStats(std::size_t num_arms) : pulls(num_arms, 0), totals(num_arms, 0.0), squares(num_arms, 0.0) {}
  std::size_t num_arms() const { return pulls.size(); }
  void record(std::size_t arm, double reward);
  double mean(std::size_t arm) const;
  /// Biased (1/s) empirical variance.
  double variance(std::size_t arm) const;
  /// Lowest-index arm with no pulls, or num_arms() if every arm was pulled.
  std::size_t first_unpulled() const;
};

class Ucb1Agent final : public BanditPolicy {
 public:
  explicit Ucb1Agent(std::size_t num_arms) : stats_(num_arms) {}
  std::string name() const override { return "UCB1"; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override { stats_.record(arm, reward); }

 private:
  ArmStats stats_;
};

class UcbVAgent final : public BanditPolicy {
 public:
  UcbVAgent(std::size_t num_arms, double range_bound) : stats_(num_arms), range_bound_(range_bound) {}
  std::string name() const override { return "UCB-V"; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override { stats_.record(arm, reward); }

 private:
  ArmStats stats_;
  double range_bound_;
};

/// Bernoulli Thompson sampling with a Beta(1, 1) prior. Rewards in [0, 1]
/// that are not binary are binarized by a Ber(reward) coin.
class BernoulliTsAgent final : public BanditPolicy {
 public:
  BernoulliTsAgent(std::size_t num_arms, std::uint64_t seed)
      : successes_(num_arms, 0.0), failures_(num_arms, 0.0), rng_(seed) {}
  std::string name() const override { return "Ber-TS"; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override;

 private:
  std::vector<double> successes_;
  std::vector<double> failures_;
  Rng rng_;
};

class GaussianTsAgent final : public BanditPolicy {
 public:
  GaussianTsAgent(std::size_t num_arms, double prior_mean, double sigma, std::uint64_t seed);
  std::string name() const override { return "Gauss-TS"; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override { stats_.record(arm, reward); }

 private:
  ArmStats stats_;
  double prior_mean_;
  double sigma_;
  Rng rng_;
};

/// Perturbed-history exploration: ceil(a s) pseudo rewards, redrawn every round.
class PheAgent final : public BanditPolicy {
 public:
  PheAgent(std::size_t num_arms, double a, PseudoFamily family, std::uint64_t seed, double pseudo_sd = 0.5);
  std::string name() const override { return family_ == PseudoFamily::kBernoulli ? "Ber-PHE" : "Gauss-PHE"; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override { stats_.record(arm, reward); }

 private:
  ArmStats stats_;
  double a_;
  PseudoFamily family_;
  double pseudo_sd_;
  Rng rng_;
};

// ---- linear baselines -----------------------------------------------------

/// x . theta_hat + c ||x||_{G^{-1}} for every arm (rows of `features`).
Eigen::VectorXd linucb_scores(const LinearModelState& state, const Eigen::MatrixXd& features, double width);

/// theta_hat + sigma_ts L^{-T} xi with G = L L^T, i.e. a draw from N(theta_hat, sigma_ts^2 G^{-1}).
Eigen::VectorXd lints_sample(const LinearModelState& state, double sigma_ts, Rng& rng);

/// G^{-1} sum X (Y + Z). Bernoulli variant: Z = a Ber(1/2) - a/2; Gaussian: Z ~ N(0, a^2).
Eigen::VectorXd linphe_fit(const LinearModelState& state, double a, PseudoFamily family, Rng& rng);

class LinUcbAgent final : public BanditPolicy {
 public:
  LinUcbAgent(Eigen::MatrixXd features, double width, double lambda);
  std::string name() const override { return "LinUCB"; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override;

 private:
  Eigen::MatrixXd features_;
  double width_;
  LinearModelState state_;
};

class LinTsAgent final : public BanditPolicy {
 public:
  LinTsAgent(Eigen::MatrixXd features, double sigma_ts, double lambda, std::uint64_t seed);
  std::string name() const override { return "LinTS"; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override;

 private:
  Eigen::MatrixXd features_;
  double sigma_ts_;
  LinearModelState state_;
  Rng rng_;
};

class LinPheAgent final : public BanditPolicy {
 public:
  LinPheAgent(Eigen::MatrixXd features, double a, PseudoFamily family, double lambda, std::uint64_t seed);
  std::string name() const override { return family_ == PseudoFamily::kBernoulli ? "Ber-LinPHE" : "Gauss-LinPHE"; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override;

 private:
  Eigen::MatrixXd features_;
  double a_;
  PseudoFamily family_;
  LinearModelState state_;
  Rng rng_;
};

}  // namespace corebandit
