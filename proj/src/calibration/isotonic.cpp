#include "stylescope/calibration/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stylescope/core/error.hpp"

namespace stylescope {

MonotoneStepFunction::MonotoneStepFunction(std::vector<double> scores, std::vector<double> values)
    : scores_(std::move(scores)), values_(std::move(values)) {
  if (scores_.empty() || scores_.size() != values_.size()) {
    throw ValidationError("monotone function: need matching, non-empty breakpoint lists");
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!std::isfinite(scores_[i]) || !std::isfinite(values_[i])) {
      throw ValidationError("monotone function: non-finite breakpoint");
    }
    if (values_[i] < 0.0 || values_[i] > 1.0) throw ValidationError("monotone function: value outside [0, 1]");
    if (i > 0 && !(scores_[i] > scores_[i - 1])) {
      throw ValidationError("monotone function: breakpoint scores must strictly increase");
    }
    if (i > 0 && values_[i] < values_[i - 1]) throw ValidationError("monotone function: values must not decrease");
  }
}

MonotoneStepFunction MonotoneStepFunction::constant(double value) {
  return MonotoneStepFunction({0.0}, {std::clamp(value, 0.0, 1.0)});
}

double MonotoneStepFunction::operator()(double score) const {
  if (scores_.empty()) throw ValidationError("monotone function: evaluated before fitting");
  if (score <= scores_.front()) return values_.front();
  if (score >= scores_.back()) return values_.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(scores_.begin(), scores_.end(), score) - scores_.begin());
  const std::size_t lo = hi - 1;
  const double t = (score - scores_[lo]) / (scores_[hi] - scores_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

IsotonicFit fit_isotonic(std::span<const IsotonicPoint> points) {
  if (points.size() < 2) throw ValidationError("isotonic fit: need at least 2 points");
  for (const auto& p : points) {
    if (!std::isfinite(p.score) || !std::isfinite(p.outcome)) throw ValidationError("isotonic fit: non-finite input");
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) throw ValidationError("isotonic fit: weights must be > 0");
    if (p.outcome < 0.0 || p.outcome > 1.0) throw ValidationError("isotonic fit: outcome outside [0, 1]");
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a].score < points[b].score; });

  // Pool ties on score, then run PAVA over the distinct scores.
  struct Block {
    double weighted_sum;
    double weight;
    std::size_t first;  // index into `distinct`
    std::size_t last;
  };
  std::vector<double> distinct;
  std::vector<Block> blocks;
  for (std::size_t idx : order) {
    const auto& p = points[idx];
    if (!distinct.empty() && p.score == distinct.back()) {
      blocks.back().weighted_sum += p.weight * p.outcome;
      blocks.back().weight += p.weight;
      continue;
    }
    distinct.push_back(p.score);
    blocks.push_back({p.weight * p.outcome, p.weight, distinct.size() - 1, distinct.size() - 1});
  }

  std::vector<Block> stack;
  stack.reserve(blocks.size());
  for (const auto& b : blocks) {
    stack.push_back(b);
    while (stack.size() > 1) {
      const auto& top = stack.back();
      const auto& prev = stack[stack.size() - 2];
      if (prev.weighted_sum / prev.weight <= top.weighted_sum / top.weight) break;
      Block merged{prev.weighted_sum + top.weighted_sum, prev.weight + top.weight, prev.first, top.last};
      stack.pop_back();
      stack.back() = merged;
    }
  }

  std::vector<double> level(distinct.size());
  for (const auto& b : stack) {
    const double mean = std::clamp(b.weighted_sum / b.weight, 0.0, 1.0);
    for (std::size_t i = b.first; i <= b.last; ++i) level[i] = mean;
  }

  IsotonicFit fit;
  fit.fitted.resize(points.size());
  {
    std::size_t d = 0;
    for (std::size_t idx : order) {
      while (distinct[d] != points[idx].score) ++d;
      fit.fitted[idx] = level[d];
    }
  }

  // Keep the end points of every constant run; interior points add nothing.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const bool same_prev = i > 0 && level[i - 1] == level[i];
    const bool same_next = i + 1 < distinct.size() && level[i + 1] == level[i];
    if (same_prev && same_next) continue;
    xs.push_back(distinct[i]);
    ys.push_back(level[i]);
  }
  fit.function = MonotoneStepFunction(std::move(xs), std::move(ys));
  return fit;
}

}  // namespace stylescope
