#pragma once

#include <cstddef>
#include <span>

#include "stylescope/calibration/isotonic.hpp"

namespace stylescope {

/// Sigmoid calibration p(s) = 1 / (1 + exp(a*s + b)), fitted by Newton's
/// method on Platt's smoothed targets. Kept as a baseline for comparison with
/// isotonic calibration.
struct PlattModel {
  double a = 0.0;
  double b = 0.0;

  double operator()(double score) const;
};

/// Outcomes must be 0 or 1. Requires >= 2 points.
PlattModel fit_platt(std::span<const IsotonicPoint> points);

/// Samples the sigmoid on a uniform grid over [0, 1] so it can live in a
/// CalibrationModel. A sigmoid that decreases in the score is not a valid
/// calibration map; it is replaced by the constant `fallback`.
MonotoneStepFunction tabulate(const PlattModel& model, double fallback, std::size_t grid = 1001);

}  // namespace stylescope
