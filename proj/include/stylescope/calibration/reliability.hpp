#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stylescope {

struct ReliabilityBin {
  double lower = 0.0;
  double upper = 0.0;
  double mean_predicted = 0.0;
  double fraction_positive = 0.0;
  std::size_t count = 0;
};

struct ReliabilityCurve {
  std::size_t bin_count = 0;
  std::size_t total = 0;
  std::vector<ReliabilityBin> bins;  // non-empty bins only, ascending

  /// Largest |fraction_positive - mean_predicted| over the emitted bins.
  double max_deviation() const;
};

/// Equal-width bins over [0, 1]; a score of exactly 1 falls in the last bin.
/// Scores must lie in [0, 1]; outcomes are 0 or 1.
ReliabilityCurve reliability(std::span<const double> scores, std::span<const std::uint8_t> outcomes,
                             std::size_t bins = 10);

}  // namespace stylescope
