#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "corebandit/errors.hpp"

namespace corebandit {

/// Uniform agent interface for single-arm bandits.
///
/// Rounds are 1-based and must be played in order: select(1), observe(y_1),
/// select(2), ... Out-of-order calls throw ProtocolError.
class BanditPolicy {
 public:
  virtual ~BanditPolicy() = default;

  virtual std::string name() const = 0;

  std::size_t select(std::size_t round) {
    if (pending_) throw ProtocolError(name() + ": select() called while a round awaits feedback");
    if (round != played_ + 1) {
      throw ProtocolError(name() + ": expected round " + std::to_string(played_ + 1) + ", got " +
                          std::to_string(round));
    }
    const std::size_t arm = choose(round);
    pending_ = arm;
    return arm;
  }

  void observe(double reward) {
    if (!pending_) throw ProtocolError(name() + ": feedback for a round that was not played");
    const std::size_t arm = *pending_;
    pending_.reset();
    ++played_;
    update(arm, reward);
  }

  std::size_t rounds_played() const { return played_; }

 protected:
  virtual std::size_t choose(std::size_t round) = 0;
  virtual void update(std::size_t arm, double reward) = 0;

 private:
  std::optional<std::size_t> pending_;
  std::size_t played_ = 0;
};

}  // namespace corebandit
