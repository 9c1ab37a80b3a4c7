#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace corebandit {

/// Seeded random stream used everywhere in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distribution adaptors are not (libstdc++ and libc++
/// produce different normals from the same engine), so every sampler below is
/// written out explicitly. Traces are therefore reproducible across platforms
/// and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via the Marsaglia polar method (pairs are cached).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);
  /// Beta(a, b) as a ratio of gammas; a, b > 0.
  double beta(double a, double b);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Folds a list of integers into one 64-bit seed: h = splitmix64(h ^ splitmix64(v + c))
/// for each value v, starting from a fixed constant. Order-sensitive.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

}  // namespace corebandit
