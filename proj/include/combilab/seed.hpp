#pragma once

#include <cstdint>
#include <random>

namespace combilab {

/// 64-bit avalanche mixer (the splitmix64 finalizer). Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed labels of one random stream: a master seed plus (experiment, trial, row).
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t experiment = 0;
  std::uint64_t trial = 0;

  SeedSpec with_experiment(std::uint64_t e) const { return {master_seed, e, trial}; }
  SeedSpec with_trial(std::uint64_t t) const { return {master_seed, experiment, t}; }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Per-(experiment, trial, row) seed. A pure function of its arguments; each
/// label is folded in through a full avalanche round.
std::uint64_t derive_seed(const SeedSpec& spec, std::uint64_t row) noexcept;

/// Seed for stream-level (not row-level) randomness of a trial.
inline std::uint64_t derive_seed(const SeedSpec& spec) noexcept {
  return derive_seed(spec, ~std::uint64_t{0});
}

/// Stable 64-bit label for a string (FNV-1a followed by mix64).
std::uint64_t label_hash(const char* text) noexcept;

/// mt19937_64 with platform-independent bounded and unit-interval draws.
/// Satisfies UniformRandomBitGenerator so std distributions accept it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Exactly uniform on [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal() { return normal_(*this); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace combilab
