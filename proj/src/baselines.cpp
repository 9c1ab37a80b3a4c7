#include "corebandit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corebandit/envs.hpp"
#include "corebandit/errors.hpp"

namespace corebandit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ucb1_index(double mean, std::size_t pulls, std::size_t round) {
  if (pulls == 0) return kInf;
  const double s = static_cast<double>(pulls);
  return mean + std::sqrt(2.0 * std::log(static_cast<double>(round)) / s);
}

double ucbv_index(double mean, double emp_var, std::size_t pulls, std::size_t round, double range_bound) {
  if (pulls == 0) return kInf;
  const double s = static_cast<double>(pulls);
  const double log_t = std::log(static_cast<double>(round));
  return mean + std::sqrt(2.0 * emp_var * log_t / s) + 3.0 * range_bound * log_t / s;
}

double bern_ts_sample(double successes, double failures, Rng& rng) {
  return rng.beta(1.0 + successes, 1.0 + failures);
}

double gauss_ts_sample(double prior_mean, double sigma, double total, std::size_t pulls, Rng& rng) {
  const double n = static_cast<double>(pulls) + 1.0;
  return rng.normal((prior_mean + total) / n, sigma / std::sqrt(n));
}

std::size_t phe_pseudo_count(double a, std::size_t pulls) {
  const double raw = a * static_cast<double>(pulls);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

double phe_estimate(double total, std::size_t pulls, std::span<const double> pseudo) {
  double sum = total;
  for (const double p : pseudo) sum += p;
  return sum / static_cast<double>(pulls + pseudo.size());
}

double phe_estimate(double total, std::size_t pulls, double a, PseudoFamily family, Rng& rng, double pseudo_sd) {
  const std::size_t count = phe_pseudo_count(a, pulls);
  double sum = total;
  if (family == PseudoFamily::kBernoulli) {
    for (std::size_t j = 0; j < count; ++j) sum += rng.bernoulli(0.5) ? 1.0 : 0.0;
  } else {
    for (std::size_t j = 0; j < count; ++j) sum += rng.normal(0.5, pseudo_sd);
  }
  return sum / static_cast<double>(pulls + count);
}

// ---- multi-armed ---------------------------------------------------------

void ArmStats::record(std::size_t arm, double reward) {
  ++pulls[arm];
  totals[arm] += reward;
  squares[arm] += reward * reward;
}

double ArmStats::mean(std::size_t arm) const {
  return pulls[arm] == 0 ? 0.0 : totals[arm] / static_cast<double>(pulls[arm]);
}

double ArmStats::variance(std::size_t arm) const {
  if (pulls[arm] == 0) return 0.0;
  const double m = mean(arm);
  return std::max(0.0, squares[arm] / static_cast<double>(pulls[arm]) - m * m);
}

std::size_t ArmStats::first_unpulled() const {
  for (std::size_t i = 0; i < pulls.size(); ++i) {
    if (pulls[i] == 0) return i;
  }
  return pulls.size();
}

std::size_t Ucb1Agent::choose(std::size_t round) {
  if (const auto u = stats_.first_unpulled(); u < stats_.num_arms()) return u;
  std::vector<double> idx(stats_.num_arms());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = ucb1_index(stats_.mean(i), stats_.pulls[i], round);
  return argmax_lowest(idx);
}

std::size_t UcbVAgent::choose(std::size_t round) {
  if (const auto u = stats_.first_unpulled(); u < stats_.num_arms()) return u;
  std::vector<double> idx(stats_.num_arms());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i] = ucbv_index(stats_.mean(i), stats_.variance(i), stats_.pulls[i], round, range_bound_);
  }
  return argmax_lowest(idx);
}

std::size_t BernoulliTsAgent::choose(std::size_t) {
  std::vector<double> samples(successes_.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = bern_ts_sample(successes_[i], failures_[i], rng_);
  return argmax_lowest(samples);
}

void BernoulliTsAgent::update(std::size_t arm, double reward) {
  const double clipped = std::clamp(reward, 0.0, 1.0);
  if (rng_.bernoulli(clipped)) {
    successes_[arm] += 1.0;
  } else {
    failures_[arm] += 1.0;
  }
}

GaussianTsAgent::GaussianTsAgent(std::size_t num_arms, double prior_mean, double sigma, std::uint64_t seed)
    : stats_(num_arms), prior_mean_(prior_mean), sigma_(sigma), rng_(seed) {
  if (!(sigma > 0.0)) throw ParameterError("Gauss-TS sigma must be positive");
}

std::size_t GaussianTsAgent::choose(std::size_t) {
  std::vector<double> samples(stats_.num_arms());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = gauss_ts_sample(prior_mean_, sigma_, stats_.totals[i], stats_.pulls[i], rng_);
  }
  return argmax_lowest(samples);
}

PheAgent::PheAgent(std::size_t num_arms, double a, PseudoFamily family, std::uint64_t seed, double pseudo_sd)
    : stats_(num_arms), a_(a), family_(family), pseudo_sd_(pseudo_sd), rng_(seed) {
  if (!(a > 0.0)) throw ParameterError("PHE perturbation scale a must be positive");
}

std::size_t PheAgent::choose(std::size_t) {
  if (const auto u = stats_.first_unpulled(); u < stats_.num_arms()) return u;
  std::vector<double> est(stats_.num_arms());
  for (std::size_t i = 0; i < est.size(); ++i) {
    est[i] = phe_estimate(stats_.totals[i], stats_.pulls[i], a_, family_, rng_, pseudo_sd_);
  }
  return argmax_lowest(est);
}

// ---- linear --------------------------------------------------------------

Eigen::VectorXd linucb_scores(const LinearModelState& state, const Eigen::MatrixXd& features, double width) {
  const auto llt = factor_spd(state.gram());
  const Eigen::VectorXd theta = llt.solve(state.xy_sum());
  Eigen::VectorXd scores = features * theta;
  if (width != 0.0) {
    // ||x||_{G^{-1}} = ||L^{-1} x|| with G = L L^T.
    const Eigen::MatrixXd whitened = llt.matrixL().solve(features.transpose());
    scores += width * whitened.colwise().norm().transpose();
  }
  return scores;
}

Eigen::VectorXd lints_sample(const LinearModelState& state, double sigma_ts, Rng& rng) {
  const auto llt = factor_spd(state.gram());
  Eigen::VectorXd theta = llt.solve(state.xy_sum());
  if (sigma_ts != 0.0) {
    Eigen::VectorXd xi(theta.size());
    for (Eigen::Index j = 0; j < xi.size(); ++j) xi(j) = rng.normal();
    theta += sigma_ts * llt.matrixU().solve(xi);
  }
  return theta;
}

Eigen::VectorXd linphe_fit(const LinearModelState& state, double a, PseudoFamily family, Rng& rng) {
  std::vector<double> z(state.size());
  if (family == PseudoFamily::kBernoulli) {
    for (auto& v : z) v = (rng.bernoulli(0.5) ? a : 0.0) - 0.5 * a;
  } else {
    for (auto& v : z) v = rng.normal(0.0, a);
  }
  const Eigen::VectorXd rhs = state.xy_sum() + state.weighted_feature_sum(z);
  return factor_spd(state.gram()).solve(rhs);
}

namespace {

std::size_t best_row(const Eigen::VectorXd& scores) {
  return argmax_lowest(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())));
}

}  // namespace

LinUcbAgent::LinUcbAgent(Eigen::MatrixXd features, double width, double lambda)
    : features_(std::move(features)), width_(width), state_(static_cast<std::size_t>(features_.cols()), lambda) {
  if (!(lambda > 0.0)) throw ParameterError("LinUCB lambda must be positive");
  if (width < 0.0) throw ParameterError("LinUCB width must be non-negative");
}

std::size_t LinUcbAgent::choose(std::size_t) { return best_row(linucb_scores(state_, features_, width_)); }

void LinUcbAgent::update(std::size_t arm, double reward) {
  state_.add(features_.row(static_cast<Eigen::Index>(arm)).transpose(), reward);
}

LinTsAgent::LinTsAgent(Eigen::MatrixXd features, double sigma_ts, double lambda, std::uint64_t seed)
    : features_(std::move(features)),
      sigma_ts_(sigma_ts),
      state_(static_cast<std::size_t>(features_.cols()), lambda),
      rng_(seed) {
  if (!(lambda > 0.0)) throw ParameterError("LinTS lambda must be positive");
  if (sigma_ts < 0.0) throw ParameterError("LinTS sigma must be non-negative");
}

std::size_t LinTsAgent::choose(std::size_t) { return lincore_select(lints_sample(state_, sigma_ts_, rng_), features_); }

void LinTsAgent::update(std::size_t arm, double reward) {
  state_.add(features_.row(static_cast<Eigen::Index>(arm)).transpose(), reward);
}

LinPheAgent::LinPheAgent(Eigen::MatrixXd features, double a, PseudoFamily family, double lambda, std::uint64_t seed)
    : features_(std::move(features)),
      a_(a),
      family_(family),
      state_(static_cast<std::size_t>(features_.cols()), lambda),
      rng_(seed) {
  if (!(lambda > 0.0)) throw ParameterError("LinPHE lambda must be positive");
  if (!(a > 0.0)) throw ParameterError("LinPHE perturbation scale a must be positive");
}

std::size_t LinPheAgent::choose(std::size_t) {
  if (state_.size() == 0) return 0;
  return lincore_select(linphe_fit(state_, a_, family_, rng_), features_);
}

void LinPheAgent::update(std::size_t arm, double reward) {
  state_.add(features_.row(static_cast<Eigen::Index>(arm)).transpose(), reward);
}

}  // namespace corebandit
