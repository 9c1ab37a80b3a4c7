#include "corebandit/reward_pool.hpp"

#include "corebandit/errors.hpp"

namespace corebandit {

RewardPool RewardPool::build(std::span<const double> rewards, double alpha) {
  RewardPool pool;
  pool.rebuild(rewards, alpha);
  return pool;
}

void RewardPool::rebuild(std::span<const double> rewards, double alpha) {
  if (rewards.empty()) throw EmptyHistory("reward pool needs at least one past reward");
  if (!(alpha > 0.0)) throw ParameterError("pool scale alpha must be positive");

  double sum = 0.0;
  for (const double y : rewards) sum += y;
  const double mu = sum / static_cast<double>(rewards.size());

  values_.resize(2 * rewards.size());
  for (std::size_t l = 0; l < rewards.size(); ++l) {
    const double centered = alpha * (rewards[l] - mu);
    values_[2 * l] = centered;
    // alpha (mu - Y) is exactly the negation of alpha (Y - mu) in IEEE arithmetic.
    values_[2 * l + 1] = -centered;
  }
  alpha_ = alpha;
  source_mean_ = mu;
}

double RewardPool::variance() const {
  if (values_.empty()) return 0.0;
  double sum_sq = 0.0;
  for (const double v : values_) sum_sq += v * v;
  return sum_sq / static_cast<double>(values_.size());
}

void RewardPool::require_nonempty() const {
  if (values_.empty()) throw EmptyPool("cannot draw from an empty reward pool");
}

double RewardPool::draw(Rng& rng) const {
  require_nonempty();
  return values_[rng.index(values_.size())];
}

std::vector<double> RewardPool::draw(std::size_t count, Rng& rng) const {
  require_nonempty();
  std::vector<double> out(count);
  for (auto& v : out) v = values_[rng.index(values_.size())];
  return out;
}

double RewardPool::draw_sum(std::size_t count, Rng& rng) const {
  if (count == 0) return 0.0;
  require_nonempty();
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += values_[rng.index(values_.size())];
  return sum;
}

}  // namespace corebandit
