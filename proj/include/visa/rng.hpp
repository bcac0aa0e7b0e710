#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace visa {

/// SplitMix64 finalizer. Used to seed Xoshiro and to derive per-run seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Mixes an ordered list of keys into one 64-bit seed, e.g.
/// derive_seed({base_seed, instance, solver, run}). Order matters.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys);

/// xoshiro256** 1.0 (Blackman & Vigna). Bit-identical on every platform,
/// unlike std::normal_distribution, so all generated instances and
/// trajectories are reproducible from the seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> s_{};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace visa
