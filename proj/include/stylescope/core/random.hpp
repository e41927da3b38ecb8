#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace stylescope {

/// 64-bit FNV-1a; stable across platforms and runs (unlike std::hash).
std::uint64_t stable_hash(std::string_view bytes) noexcept;

/// SplitMix64 finalizer, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

/// Seeded generator whose draws are identical on every platform: the engine is
/// fully specified by the standard and all distributions are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform on [0, n); n must be > 0.
  std::size_t uniform_index(std::size_t n);
  double normal();
  bool bernoulli(double p) { return uniform01() < p; }
  /// Index drawn proportionally to non-negative `weights` (sum must be > 0).
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace stylescope
