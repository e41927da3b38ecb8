#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stylescope/core/schema.hpp"
#include "stylescope/ingestion/binning.hpp"

namespace stylescope {

inline constexpr std::size_t default_bin_cap = 4000;

/// Caps every (city, week) bin at `cap` records. Bins at or under the cap are
/// kept whole; larger bins are sampled uniformly without replacement from an
/// RNG seeded by (seed, bin), so the result does not depend on how records are
/// distributed across workers. Returns ascending indices into `bins`.
std::vector<std::size_t> balanced_subsample(std::span<const BinKey> bins, std::size_t cap, std::uint64_t seed);

/// Two-stage sampler over the labeled examples of one attribute: draw a class
/// uniformly, then an example of that class uniformly.
class StratifiedSampler {
 public:
  /// With an empty `classes` list the classes are those present in the pool
  /// (sorted). With an explicit list every class must have an example.
  explicit StratifiedSampler(std::span<const LabeledExample> pool, std::vector<std::string> classes = {});

  std::vector<LabeledExample> draw(std::size_t batch, std::uint64_t seed) const;

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::string& attribute() const noexcept { return attribute_; }

 private:
  std::string attribute_;
  std::vector<std::string> classes_;
  std::vector<std::vector<LabeledExample>> by_class_;
};

}  // namespace stylescope
