#include "corebandit/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "corebandit/agents.hpp"
#include "corebandit/baselines.hpp"
#include "corebandit/errors.hpp"

namespace corebandit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx_ratio(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }
}  // namespace

double bernoulli_kl(double p, double q) {
  if ((q <= 0.0 && p > 0.0) || (q >= 1.0 && p < 1.0)) return kInf;
  return xlogx_ratio(p, q) + xlogx_ratio(1.0 - p, 1.0 - q);
}

double klucb_budget(std::size_t round) {
  const double log_t = std::log(static_cast<double>(std::max<std::size_t>(round, 1)));
  if (log_t <= 1.0) return log_t;  // ln ln t <= 0
  return log_t + 3.0 * std::log(log_t);
}

double klucb_upper(double mean, std::size_t observations, double budget) {
  if (mean >= 1.0) return 1.0;
  const double s = static_cast<double>(observations);
  double lo = mean;
  double hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (s * bernoulli_kl(mean, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double klucb_index(std::size_t clicks, std::size_t observations, std::size_t round) {
  if (observations == 0) return 1.0;
  const double mean = static_cast<double>(clicks) / static_cast<double>(observations);
  return klucb_upper(mean, observations, klucb_budget(round));
}

std::vector<std::size_t> rank_topk(std::span<const double> scores, std::size_t k) {
  if (k > scores.size()) throw ParameterError("cannot rank more items than there are scores");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(k);
  return order;
}

void cascade_update(ItemStats& stats, std::span<const std::size_t> list, const ClickFeedback& feedback) {
  if (feedback.click && *feedback.click >= list.size()) {
    throw ProtocolError("click position beyond the shown list");
  }
  for (const auto item : list) {
    if (item >= stats.num_items()) throw ProtocolError("shown item out of range");
  }
  const std::size_t examined = feedback.observed(list.size());
  for (std::size_t k = 0; k < examined; ++k) ++stats.observations[list[k]];
  if (feedback.click) ++stats.clicks[list[*feedback.click]];
}

std::vector<std::size_t> optimal_list(const CascadeInstance& instance) {
  return rank_topk(instance.attractions, instance.list_length);
}

double ranking_regret(const CascadeInstance& instance, std::span<const std::size_t> list) {
  const auto best = optimal_list(instance);
  return std::max(0.0, cascade_expected_clicks(instance, best) - cascade_expected_clicks(instance, list));
}

std::string to_string(RankerKind kind) {
  switch (kind) {
    case RankerKind::kCore:
      return "CORe";
    case RankerKind::kKlUcb:
      return "CascadeKL-UCB";
    case RankerKind::kBernoulliTs:
      return "Ber-TS";
    case RankerKind::kBernoulliPhe:
      return "Ber-PHE";
  }
  return "unknown";
}

CascadeRanker::CascadeRanker(std::size_t num_items, std::size_t list_length, const RankerParams& params,
                             std::uint64_t seed)
    : list_length_(list_length), params_(params), stats_(num_items), rng_(seed) {
  if (list_length < 1 || list_length > num_items) throw ParameterError("ranker needs 1 <= K <= L");
  if (params_.kind == RankerKind::kCore) {
    CoreParams core{params_.alpha, params_.z, 1.0, params_.horizon};
    core.validate();
    init_observations_ = init_length(params_.horizon, params_.z, num_items);
  }
  if (params_.kind == RankerKind::kBernoulliPhe && !(params_.a > 0.0)) {
    throw ParameterError("Ber-PHE perturbation scale a must be positive");
  }
}

std::string CascadeRanker::name() const { return to_string(params_.kind); }

std::vector<double> CascadeRanker::scores(std::size_t round) {
  const std::size_t l = stats_.num_items();
  std::vector<double> out(l);
  switch (params_.kind) {
    case RankerKind::kCore: {
      pool_.rebuild(history_, params_.alpha);
      for (std::size_t i = 0; i < l; ++i) {
        const auto s = stats_.observations[i];
        out[i] = s == 0 ? kInf
                        : (static_cast<double>(stats_.clicks[i]) + pool_.draw_sum(s, rng_)) / static_cast<double>(s);
      }
      break;
    }
    case RankerKind::kKlUcb:
      for (std::size_t i = 0; i < l; ++i) out[i] = klucb_index(stats_.clicks[i], stats_.observations[i], round);
      break;
    case RankerKind::kBernoulliTs:
      for (std::size_t i = 0; i < l; ++i) {
        const auto c = static_cast<double>(stats_.clicks[i]);
        out[i] = bern_ts_sample(c, static_cast<double>(stats_.observations[i]) - c, rng_);
      }
      break;
    case RankerKind::kBernoulliPhe:
      for (std::size_t i = 0; i < l; ++i) {
        const auto s = stats_.observations[i];
        out[i] = s == 0 ? kInf
                        : phe_estimate(static_cast<double>(stats_.clicks[i]), s, params_.a, PseudoFamily::kBernoulli,
                                       rng_);
      }
      break;
  }
  return out;
}

std::vector<std::size_t> CascadeRanker::select(std::size_t round) {
  if (pending_) throw ProtocolError(name() + ": select() called while a list awaits feedback");
  if (round != played_ + 1) throw ProtocolError(name() + ": rounds must be played in order");

  std::vector<std::size_t> list;
  if (params_.kind == RankerKind::kCore && history_.size() < init_observations_) {
    const std::size_t l = stats_.num_items();
    list.reserve(list_length_);
    for (std::size_t k = 0; k < list_length_; ++k) list.push_back((round - 1 + k) % l);
  } else {
    list = rank_topk(scores(round), list_length_);
  }
  pending_ = list;
  return list;
}

void CascadeRanker::observe(const ClickFeedback& feedback) {
  if (!pending_) throw ProtocolError(name() + ": feedback for a list that was not shown");
  const auto list = std::move(*pending_);
  pending_.reset();
  cascade_update(stats_, list, feedback);
  const std::size_t examined = feedback.observed(list.size());
  for (std::size_t k = 0; k < examined; ++k) {
    history_.push_back(feedback.click && *feedback.click == k ? 1.0 : 0.0);
  }
  ++played_;
}

}  // namespace corebandit
