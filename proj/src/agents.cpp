#include "corebandit/agents.hpp"

#include <cmath>
#include <limits>

#include "corebandit/envs.hpp"
#include "corebandit/errors.hpp"

namespace corebandit {

void CoreParams::validate() const {
  if (!(z > 0.0 && z < 1.0)) throw ParameterError("z must lie in (0, 1)");
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  const bool lambda_ok = lambda > 0.0 || (allow_zero_ridge && lambda == 0.0);
  if (!lambda_ok) throw ParameterError("lambda must be positive");
  if (horizon < 1) throw ParameterError("horizon must be >= 1");
}

std::size_t init_length(std::size_t horizon, double z, std::size_t dims) {
  if (!(z > 0.0 && z < 1.0)) throw ParameterError("z must lie in (0, 1)");
  if (horizon < 1) throw ParameterError("horizon must be >= 1");
  const double denom = z - 1.0 - std::log(z);
  const double threshold = 4.0 * std::log(static_cast<double>(horizon)) / denom + 1.0;
  const auto rounds = static_cast<std::size_t>(std::ceil(threshold));
  return std::max(dims, rounds);
}

// ---- multi-armed ---------------------------------------------------------

void MabAgentState::record(std::size_t arm, double reward) {
  ++pulls[arm];
  totals[arm] += reward;
  rewards.push_back(reward);
  arms.push_back(arm);
}

std::vector<double> perturbation_sums(const MabAgentState& state, const RewardPool& pool, Rng& rng) {
  std::vector<double> sums(state.num_arms(), 0.0);
  if (state.arms.empty()) return sums;
  if (pool.empty()) throw EmptyPool("CORe needs a non-empty reward pool");
  for (const std::size_t arm : state.arms) sums[arm] += pool.draw(rng);
  return sums;
}

std::vector<double> perturbed_means(const MabAgentState& state, std::span<const double> sums) {
  std::vector<double> est(state.num_arms());
  for (std::size_t i = 0; i < est.size(); ++i) {
    est[i] = state.pulls[i] == 0 ? std::numeric_limits<double>::infinity()
                                 : (state.totals[i] + sums[i]) / static_cast<double>(state.pulls[i]);
  }
  return est;
}

std::size_t core_select(const MabAgentState& state, const RewardPool& pool, Rng& rng) {
  for (std::size_t i = 0; i < state.num_arms(); ++i) {
    if (state.pulls[i] == 0) return i;
  }
  const auto sums = perturbation_sums(state, pool, rng);
  const auto est = perturbed_means(state, sums);
  return argmax_lowest(est);
}

CoreAgent::CoreAgent(std::size_t num_arms, const CoreParams& params, std::uint64_t seed)
    : params_(params), state_(num_arms), rng_(seed) {
  params_.validate();
  if (num_arms < 1) throw ParameterError("CORe needs at least one arm");
  init_rounds_ = init_length(params_.horizon, params_.z, num_arms);
}

std::size_t CoreAgent::choose(std::size_t round) {
  if (round <= init_rounds_) return round_robin_arm(round, state_.num_arms());
  pool_.rebuild(state_.rewards, params_.alpha);
  return core_select(state_, pool_, rng_);
}

void CoreAgent::update(std::size_t arm, double reward) { state_.record(arm, reward); }

// ---- linear --------------------------------------------------------------

LinearModelState::LinearModelState(std::size_t dim, double lambda)
    : dim_(dim),
      lambda_(lambda),
      gram_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) *
            lambda),
      xy_sum_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))) {}

void LinearModelState::add(const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
  if (static_cast<std::size_t>(x.size()) != dim_) throw ParameterError("feature dimension mismatch");
  gram_.noalias() += x * x.transpose();
  xy_sum_.noalias() += x * y;
  features_.insert(features_.end(), x.data(), x.data() + x.size());
  rewards_.push_back(y);
}

void LinearModelState::set_lambda(double lambda) {
  gram_.diagonal().array() += lambda - lambda_;
  lambda_ = lambda;
}

Eigen::VectorXd LinearModelState::feature(std::size_t l) const {
  return Eigen::Map<const Eigen::VectorXd>(features_.data() + l * dim_, static_cast<Eigen::Index>(dim_));
}

Eigen::MatrixXd LinearModelState::recompute_gram() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(d, d) * lambda_;
  for (std::size_t l = 0; l < size(); ++l) {
    const Eigen::VectorXd x = feature(l);
    g.noalias() += x * x.transpose();
  }
  return g;
}

Eigen::VectorXd LinearModelState::weighted_feature_sum(std::span<const double> weights) const {
  if (weights.size() != size()) throw ParameterError("need one weight per history item");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
  const double* row = features_.data();
  for (std::size_t l = 0; l < weights.size(); ++l, row += dim_) {
    const double w = weights[l];
    for (std::size_t j = 0; j < dim_; ++j) acc[static_cast<Eigen::Index>(j)] += row[j] * w;
  }
  return acc;
}

Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& matrix) {
  Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  if (llt.info() != Eigen::Success) throw InternalError("Gram matrix is not symmetric positive definite");
  return llt;
}

Eigen::VectorXd ridge_estimate(const LinearModelState& state) {
  return factor_spd(state.gram()).solve(state.xy_sum());
}

Eigen::VectorXd lincore_fit(const LinearModelState& state, std::span<const double> perturbations) {
  if (state.size() == 0) throw EmptyHistory("LinCORe fit needs at least one observation");
  const Eigen::VectorXd rhs = state.xy_sum() + state.weighted_feature_sum(perturbations);
  return factor_spd(state.gram()).solve(rhs);
}

Eigen::VectorXd lincore_fit(const LinearModelState& state, const RewardPool& pool, Rng& rng) {
  if (state.size() == 0) throw EmptyHistory("LinCORe fit needs at least one observation");
  const auto z = pool.draw(state.size(), rng);
  return lincore_fit(state, z);
}

std::size_t lincore_select(const Eigen::VectorXd& theta, const Eigen::MatrixXd& features) {
  const Eigen::VectorXd scores = features * theta;
  return argmax_lowest(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())));
}

LinCoreAgent::LinCoreAgent(Eigen::MatrixXd features, const CoreParams& params, std::uint64_t seed)
    : features_(std::move(features)),
      params_(params),
      state_(static_cast<std::size_t>(features_.cols()), params.lambda),
      rng_(seed) {
  params_.validate();
  if (features_.rows() < 1 || features_.cols() < 1) throw ParameterError("LinCORe needs a non-empty feature matrix");
  init_rounds_ = init_length(params_.horizon, params_.z, static_cast<std::size_t>(features_.cols()));
}

std::size_t LinCoreAgent::choose(std::size_t round) {
  const auto num_arms = static_cast<std::size_t>(features_.rows());
  if (round <= init_rounds_) return round_robin_arm(round, num_arms);
  if (!ridge_resolved_) {
    ridge_resolved_ = true;
    if (params_.ridge_mode == RidgeMode::kMinEigenQuarter) {
      const auto d = static_cast<Eigen::Index>(state_.dim());
      const Eigen::MatrixXd data_gram = state_.gram() - Eigen::MatrixXd::Identity(d, d) * state_.lambda();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(data_gram, Eigen::EigenvaluesOnly);
      const double quarter = eig.eigenvalues().minCoeff() / 4.0;
      // Rank-deficient initialization data keeps the configured lambda.
      if (quarter > 0.0) state_.set_lambda(quarter);
    }
  }
  pool_.rebuild(state_.rewards(), params_.alpha);
  const Eigen::VectorXd theta = lincore_fit(state_, pool_, rng_);
  return lincore_select(theta, features_);
}

void LinCoreAgent::update(std::size_t arm, double reward) {
  state_.add(features_.row(static_cast<Eigen::Index>(arm)).transpose(), reward);
}

}  // namespace corebandit
