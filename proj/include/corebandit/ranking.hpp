#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corebandit/envs.hpp"
#include "corebandit/reward_pool.hpp"
#include "corebandit/rng.hpp"

namespace corebandit {

/// Bernoulli KL divergence kl(p, q), with the 0 log 0 = 0 convention.
double bernoulli_kl(double p, double q);

/// Exploration budget of CascadeKL-UCB: ln t + 3 ln ln t (just ln t while ln ln t < 0).
double klucb_budget(std::size_t round);

/// max{q in [mu, 1] : s kl(mu, q) <= budget}, solved by bisection to 1e-9.
double klucb_upper(double mean, std::size_t observations, double budget);

/// KL-UCB index of an item: klucb_upper(clicks/obs, obs, klucb_budget(t)), 1 for unobserved items.
double klucb_index(std::size_t clicks, std::size_t observations, std::size_t round);

/// Indices of the K largest scores in descending order, lowest index first on ties.
std::vector<std::size_t> rank_topk(std::span<const double> scores, std::size_t k);

/// Per-item attraction counts under the cascade feedback convention.
struct ItemStats {
  std::vector<std::size_t> observations;
  std::vector<std::size_t> clicks;

  explicit ItemStats(std::size_t num_items) : observations(num_items, 0), clicks(num_items, 0) {}
  std::size_t num_items() const { return observations.size(); }
};

/// Items above the click (or the whole list when nothing was clicked) gain
/// one unattracted observation; the clicked item gains an observation and a
/// click; items below the click are untouched.
void cascade_update(ItemStats& stats, std::span<const std::size_t> list, const ClickFeedback& feedback);

/// Expected clicks of the best K-set minus those of `list`.
double ranking_regret(const CascadeInstance& instance, std::span<const std::size_t> list);

/// Optimal list: the K most attractive items.
std::vector<std::size_t> optimal_list(const CascadeInstance& instance);

enum class RankerKind { kCore, kKlUcb, kBernoulliTs, kBernoulliPhe };

struct RankerParams {
  RankerKind kind = RankerKind::kCore;
  double alpha = 0.6;  // CORe
  double z = 0.6;      // CORe
  double a = 0.5;      // Ber-PHE
  std::size_t horizon = 20000;
};

/// Top-K policy driven by per-item estimates.
///
/// CORe keeps one shared pool of every binary attraction observation. Until
/// the pool holds init_length(n, z, L) observations it shows rotated lists
/// (round t starts at item (t-1) mod L); afterwards each item's score is
/// (clicks + U) / observations with U the sum of `observations` fresh pool
/// draws. CORe and Ber-PHE score unobserved items +infinity, KL-UCB gives
/// them index 1 and Ber-TS samples them from the flat prior.
class CascadeRanker {
 public:
  CascadeRanker(std::size_t num_items, std::size_t list_length, const RankerParams& params, std::uint64_t seed);

  std::string name() const;

  /// Ranked list for 1-based round t. Throws ProtocolError if the previous
  /// list still awaits feedback or rounds are skipped.
  std::vector<std::size_t> select(std::size_t round);
  void observe(const ClickFeedback& feedback);

  const ItemStats& stats() const { return stats_; }
  std::size_t init_observations() const { return init_observations_; }

 private:
  std::vector<double> scores(std::size_t round);

  std::size_t list_length_;
  RankerParams params_;
  ItemStats stats_;
  std::vector<double> history_;  // binary attraction observations, in order
  RewardPool pool_;
  Rng rng_;
  std::size_t init_observations_ = 0;
  std::optional<std::vector<std::size_t>> pending_;
  std::size_t played_ = 0;
};

std::string to_string(RankerKind kind);

}  // namespace corebandit
