#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corebandit/policy.hpp"
#include "corebandit/reward_pool.hpp"
#include "corebandit/rng.hpp"

namespace corebandit {

enum class RidgeMode {
  kFixed,          // use CoreParams::lambda
  kMinEigenQuarter // lambda = smallest eigenvalue of the initialization Gram matrix / 4
};

struct CoreParams {
  double alpha = 0.6;  // pool scale ratio
  double z = 0.6;      // initial variance ratio, in (0, 1)
  double lambda = 1.0; // ridge regularizer
  std::size_t horizon = 10000;
  RidgeMode ridge_mode = RidgeMode::kFixed;
  // Lets lambda = 0 through validation. Only meaningful for one-hot features
  // where the initialization pulls every arm.
  bool allow_zero_ridge = false;

  void validate() const;
};

/// Length of the forced round-robin phase: max{dims, ceil(4 ln n / (z - 1 - ln z) + 1)}.
std::size_t init_length(std::size_t horizon, double z, std::size_t dims);

/// 0-based arm pulled by round-robin in 1-based round t.
inline std::size_t round_robin_arm(std::size_t round, std::size_t num_arms) {
  return (round - 1) % num_arms;
}

// ---- multi-armed CORe ------------------------------------------------------

struct MabAgentState {
  std::vector<std::size_t> pulls;  // T_{i,t-1}
  std::vector<double> totals;      // V_{i,s}
  std::vector<double> rewards;     // all observed rewards, in order
  std::vector<std::size_t> arms;   // arm pulled in each past round

  explicit MabAgentState(std::size_t num_arms) : pulls(num_arms, 0), totals(num_arms, 0.0) {}

  std::size_t num_arms() const { return pulls.size(); }
  std::size_t rounds() const { return rewards.size(); }
  void record(std::size_t arm, double reward);
};

/// U_i for every arm: one fresh pool draw per past observation, drawn in
/// history order and summed per arm. Each arm with s pulls receives s i.i.d.
/// draws. LinCORe consumes the stream in the same order, so both agents see
/// identical perturbations given the same seed.
std::vector<double> perturbation_sums(const MabAgentState& state, const RewardPool& pool, Rng& rng);

/// (V_i + U_i) / s_i, or +infinity for unpulled arms.
std::vector<double> perturbed_means(const MabAgentState& state, std::span<const double> sums);

/// Lowest-index unpulled arm if any; otherwise argmax of the perturbed means.
std::size_t core_select(const MabAgentState& state, const RewardPool& pool, Rng& rng);

class CoreAgent final : public BanditPolicy {
 public:
  CoreAgent(std::size_t num_arms, const CoreParams& params, std::uint64_t seed);

  std::string name() const override { return "CORe"; }
  const MabAgentState& state() const { return state_; }
  const RewardPool& pool() const { return pool_; }
  std::size_t init_rounds() const { return init_rounds_; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override;

 private:
  CoreParams params_;
  MabAgentState state_;
  RewardPool pool_;
  Rng rng_;
  std::size_t init_rounds_;
};

// ---- linear CORe -----------------------------------------------------------

/// Ridge regression state: G = lambda I + sum X X^T, b = sum X Y, plus the
/// full (X, Y) history for per-round re-perturbation.
class LinearModelState {
 public:
  LinearModelState(std::size_t dim, double lambda);

  void add(const Eigen::Ref<const Eigen::VectorXd>& x, double y);
  /// Replaces lambda, shifting the Gram diagonal accordingly.
  void set_lambda(double lambda);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rewards_.size(); }
  double lambda() const { return lambda_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& xy_sum() const { return xy_sum_; }
  std::span<const double> rewards() const { return rewards_; }
  Eigen::VectorXd feature(std::size_t l) const;

  /// lambda I + sum X X^T evaluated from the stored history.
  Eigen::MatrixXd recompute_gram() const;
  /// sum_l X_l w_l; `weights` must have one entry per history item.
  Eigen::VectorXd weighted_feature_sum(std::span<const double> weights) const;

 private:
  std::size_t dim_;
  double lambda_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd xy_sum_;
  std::vector<double> features_;  // row-major, size() x dim()
  std::vector<double> rewards_;
};

/// Cholesky factor of an SPD matrix; throws InternalError if it is not SPD.
Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& matrix);

/// Unperturbed ridge estimate G^{-1} sum X Y.
Eigen::VectorXd ridge_estimate(const LinearModelState& state);

/// G^{-1} (sum X Y + sum X Z) for explicit perturbations Z (one per history item).
Eigen::VectorXd lincore_fit(const LinearModelState& state, std::span<const double> perturbations);

/// Draws one fresh pool value per history item, then fits as above.
Eigen::VectorXd lincore_fit(const LinearModelState& state, const RewardPool& pool, Rng& rng);

/// argmax_i x_i . theta with lowest-index tie-break. Rows of `features` are arms.
std::size_t lincore_select(const Eigen::VectorXd& theta, const Eigen::MatrixXd& features);

class LinCoreAgent final : public BanditPolicy {
 public:
  LinCoreAgent(Eigen::MatrixXd features, const CoreParams& params, std::uint64_t seed);

  std::string name() const override { return "LinCORe"; }
  const LinearModelState& state() const { return state_; }
  std::size_t init_rounds() const { return init_rounds_; }

 protected:
  std::size_t choose(std::size_t round) override;
  void update(std::size_t arm, double reward) override;

 private:
  Eigen::MatrixXd features_;
  CoreParams params_;
  LinearModelState state_;
  RewardPool pool_;
  Rng rng_;
  std::size_t init_rounds_;
  bool ridge_resolved_ = false;
};

}  // namespace corebandit
