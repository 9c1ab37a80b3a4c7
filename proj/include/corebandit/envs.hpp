#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corebandit/rng.hpp"

namespace corebandit {

enum class RewardFamily { kBernoulli, kBeta, kGaussian };

std::string to_string(RewardFamily family);
RewardFamily parse_reward_family(const std::string& name);

/// Mean-parameterized reward distribution shared by all arms of an instance.
struct NoiseModel {
  RewardFamily family = RewardFamily::kBernoulli;
  double beta_concentration = 4.0;  // v in Beta(v*mu, v*(1-mu))
  double gaussian_sd = 0.5;

  static NoiseModel bernoulli() { return {RewardFamily::kBernoulli, 4.0, 0.5}; }
  static NoiseModel beta(double v = 4.0) { return {RewardFamily::kBeta, v, 0.5}; }
  static NoiseModel gaussian(double sd = 0.5) { return {RewardFamily::kGaussian, 4.0, sd}; }

  double sample(double mean, Rng& rng) const;
  double variance(double mean) const;
  /// Bound on the support width used by range-based indices (UCB-V).
  /// Gaussian rewards are unbounded; 1 + 4 sd is used as a truncation heuristic.
  double range_bound() const;
};

struct MabInstance {
  std::vector<double> means;
  NoiseModel noise;

  std::size_t num_arms() const { return means.size(); }
  void validate() const;
};

/// Linear bandit. Row i of `features` is x_i; mean reward of arm i is x_i . theta_star.
struct LinearInstance {
  Eigen::MatrixXd features;
  Eigen::VectorXd theta_star;
  NoiseModel noise;

  std::size_t num_arms() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  std::vector<double> means() const;
  void validate() const;
};

/// Cascade click model over L items; the agent shows `list_length` (K) of them.
struct CascadeInstance {
  std::vector<double> attractions;
  std::size_t list_length = 1;

  std::size_t num_items() const { return attractions.size(); }
  void validate() const;
};

// ---- generation -----------------------------------------------------------

/// K means drawn i.i.d. Uniform[0.25, 0.75].
MabInstance generate_mab(std::size_t num_arms, const NoiseModel& noise, Rng& rng);

/// K arms in d dimensions with every mean in [0.25, 0.75].
///
/// The first d-1 feature coordinates and the raw parameter are i.i.d.
/// Uniform[-1, 1]; the last coordinate is a constant 1 that carries the offset.
/// The parameter is then rescaled and shifted so the raw scores map affinely
/// onto [0.25, 0.75]. Draws are repeated (up to 100 times) until the last d
/// feature vectors form a basis.
LinearInstance generate_linear(std::size_t num_arms, std::size_t dim, const NoiseModel& noise,
                               Rng& rng);

/// Synthetic cascade model: L attractions drawn i.i.d. Beta(1, 4) (mean 0.2),
/// mimicking click logs where most documents are rarely clicked.
CascadeInstance generate_cascade(std::size_t num_items, std::size_t list_length, Rng& rng);

constexpr int kMaxBasisRetries = 100;

// ---- rewards and ground truth ---------------------------------------------

double sample_reward(const MabInstance& instance, std::size_t arm, Rng& rng);
double sample_reward(const LinearInstance& instance, std::size_t arm, Rng& rng);

/// Index of the largest value; lowest index wins ties.
std::size_t argmax_lowest(std::span<const double> values);

std::vector<double> gaps_from_means(std::span<const double> means);
std::vector<double> gaps(const MabInstance& instance);
std::vector<double> gaps(const LinearInstance& instance);

// ---- cascade model --------------------------------------------------------

/// Throws InvalidInstance on duplicates, out-of-range items or wrong length.
void validate_ranked_list(const CascadeInstance& instance, std::span<const std::size_t> list);

/// 1 - prod_k (1 - w(a_k)): probability that the user clicks something.
double cascade_expected_clicks(const CascadeInstance& instance, std::span<const std::size_t> list);

/// Outcome of one simulated user. `click` is the 0-based position of the
/// clicked item. Positions before the click (or all K positions when there is
/// no click) were examined and found unattractive; positions after the click
/// were not examined.
struct ClickFeedback {
  std::optional<std::size_t> click;

  /// Number of leading positions whose attraction was observed.
  std::size_t observed(std::size_t list_length) const { return click ? *click + 1 : list_length; }
};

ClickFeedback cascade_step(const CascadeInstance& instance, std::span<const std::size_t> list,
                           Rng& rng);

// Cascade model files:
//   L=<int> K=<int>
//   <item_id>\t<attraction>      (one line per item, ids 0..L-1)
CascadeInstance load_cascade_model(const std::filesystem::path& path);
void save_cascade_model(const CascadeInstance& instance, const std::filesystem::path& path);
CascadeInstance parse_cascade_model(const std::string& text);
std::string format_cascade_model(const CascadeInstance& instance);

}  // namespace corebandit
