#include "stylescope/calibration/reliability.hpp"

#include <algorithm>
#include <cmath>

#include "stylescope/core/error.hpp"

namespace stylescope {

double ReliabilityCurve::max_deviation() const {
  double worst = 0.0;
  for (const auto& b : bins) worst = std::max(worst, std::abs(b.fraction_positive - b.mean_predicted));
  return worst;
}

ReliabilityCurve reliability(std::span<const double> scores, std::span<const std::uint8_t> outcomes,
                             std::size_t bins) {
  if (bins == 0) throw UsageError("reliability: bin count must be >= 1");
  if (scores.size() != outcomes.size()) throw ValidationError("reliability: scores and outcomes differ in length");
  std::vector<double> score_sum(bins, 0.0);
  std::vector<std::size_t> positives(bins, 0), counts(bins, 0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("reliability: score outside [0, 1]");
    if (outcomes[i] > 1) throw ValidationError("reliability: outcome must be 0 or 1");
    const auto b = std::min(bins - 1, static_cast<std::size_t>(s * static_cast<double>(bins)));
    score_sum[b] += s;
    positives[b] += outcomes[i];
    ++counts[b];
  }
  ReliabilityCurve curve;
  curve.bin_count = bins;
  curve.total = scores.size();
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double n = static_cast<double>(counts[b]);
    curve.bins.push_back({static_cast<double>(b) / static_cast<double>(bins),
                          static_cast<double>(b + 1) / static_cast<double>(bins), score_sum[b] / n,
                          static_cast<double>(positives[b]) / n, counts[b]});
  }
  return curve;
}

}  // namespace stylescope
