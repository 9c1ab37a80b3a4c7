#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corebandit/rng.hpp"

namespace corebandit {

/// Centered, symmetrized and alpha-scaled copy of a reward history.
///
/// For rewards Y_1..Y_m with mean mu the pool holds, in input order, the pairs
/// (alpha (Y_l - mu), alpha (mu - Y_l)). It has zero mean, is symmetric around
/// zero and has 2m entries. Draws pick entries uniformly with replacement.
class RewardPool {
 public:
  RewardPool() = default;

  /// Throws EmptyHistory for an empty reward sequence and ParameterError for alpha <= 0.
  static RewardPool build(std::span<const double> rewards, double alpha);

  /// Same as build() but reuses this pool's storage.
  void rebuild(std::span<const double> rewards, double alpha);

  std::span<const double> values() const { return values_; }
  double alpha() const { return alpha_; }
  double source_mean() const { return source_mean_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// Mean of squared entries, i.e. the variance of one draw.
  double variance() const;

  double draw(Rng& rng) const;
  std::vector<double> draw(std::size_t count, Rng& rng) const;
  /// Sum of `count` independent draws.
  double draw_sum(std::size_t count, Rng& rng) const;

 private:
  void require_nonempty() const;

  std::vector<double> values_;
  double alpha_ = 1.0;
  double source_mean_ = 0.0;
};

inline RewardPool build_pool(std::span<const double> rewards, double alpha) {
  return RewardPool::build(rewards, alpha);
}

/// Variance of a single draw: (1/|R|) sum y^2. Zero for an empty pool.
inline double pool_variance(const RewardPool& pool) { return pool.variance(); }

}  // namespace corebandit
