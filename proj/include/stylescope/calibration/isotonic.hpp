#pragma once

#include <span>
#include <vector>

namespace stylescope {

struct IsotonicPoint {
  double score = 0.0;
  double outcome = 0.0;
  double weight = 1.0;
};

/// Non-decreasing piecewise-linear map given by breakpoints. Between
/// breakpoints values are linearly interpolated; outside the breakpoint range
/// the end values are held.
class MonotoneStepFunction {
 public:
  MonotoneStepFunction() = default;
  /// Throws ValidationError unless scores strictly increase and values are
  /// non-decreasing within [0, 1]. At least one breakpoint is required.
  MonotoneStepFunction(std::vector<double> scores, std::vector<double> values);

  static MonotoneStepFunction constant(double value);

  double operator()(double score) const;

  const std::vector<double>& scores() const noexcept { return scores_; }
  const std::vector<double>& values() const noexcept { return values_; }
  bool empty() const noexcept { return scores_.empty(); }

  friend bool operator==(const MonotoneStepFunction&, const MonotoneStepFunction&) = default;

 private:
  std::vector<double> scores_;
  std::vector<double> values_;
};

struct IsotonicFit {
  MonotoneStepFunction function;
  /// Fitted value for every input point, in input order.
  std::vector<double> fitted;
};

/// Weighted least-squares non-decreasing regression of outcome on score via
/// pool-adjacent-violators. Points sharing a score are pooled first so they
/// receive one fitted value. Requires >= 2 points with positive weights.
/// Outcomes must lie in [0, 1].
IsotonicFit fit_isotonic(std::span<const IsotonicPoint> points);

}  // namespace stylescope
