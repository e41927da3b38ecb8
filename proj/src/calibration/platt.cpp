#include "stylescope/calibration/platt.hpp"

#include <cmath>
#include <vector>

#include "stylescope/core/error.hpp"

namespace stylescope {

double PlattModel::operator()(double score) const {
  const double f = a * score + b;
  // numerically stable logistic of -f
  return f >= 0 ? std::exp(-f) / (1.0 + std::exp(-f)) : 1.0 / (1.0 + std::exp(f));
}

PlattModel fit_platt(std::span<const IsotonicPoint> points) {
  if (points.size() < 2) throw ValidationError("platt fit: need at least 2 points");
  double pos = 0.0, neg = 0.0;
  for (const auto& p : points) {
    if (p.outcome != 0.0 && p.outcome != 1.0) throw ValidationError("platt fit: outcomes must be 0 or 1");
    (p.outcome > 0.5 ? pos : neg) += p.weight;
  }
  const double hi = (pos + 1.0) / (pos + 2.0);
  const double lo = 1.0 / (neg + 2.0);
  std::vector<double> target(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) target[i] = points[i].outcome > 0.5 ? hi : lo;

  PlattModel m{0.0, std::log((neg + 1.0) / (pos + 1.0))};
  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double z = a * points[i].score + b;
      const double w = points[i].weight;
      f += z >= 0 ? w * (target[i] * z + std::log1p(std::exp(-z))) : w * ((target[i] - 1.0) * z + std::log1p(std::exp(z)));
    }
    return f;
  };

  constexpr double sigma = 1e-12;
  double fval = objective(m.a, m.b);
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = sigma, h22 = sigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double s = points[i].score, w = points[i].weight;
      const double z = m.a * s + m.b;
      double p, q;
      if (z >= 0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = w * p * q;
      h11 += s * s * d2;
      h22 += d2;
      h21 += s * d2;
      const double d1 = w * (target[i] - p);
      g1 += s * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-9 && std::abs(g2) < 1e-9) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    bool improved = false;
    while (step >= 1e-10) {
      const double na = m.a + step * da, nb = m.b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        m = {na, nb};
        fval = nf;
        improved = true;
        break;
      }
      step /= 2.0;
    }
    if (!improved) break;
  }
  if (!std::isfinite(m.a) || !std::isfinite(m.b)) throw NumericError("platt fit did not converge");
  return m;
}

MonotoneStepFunction tabulate(const PlattModel& model, double fallback, std::size_t grid) {
  if (grid < 2) throw UsageError("platt tabulation needs at least 2 grid points");
  if (model.a >= 0.0) return MonotoneStepFunction::constant(fallback);
  std::vector<double> xs(grid), ys(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    xs[i] = static_cast<double>(i) / static_cast<double>(grid - 1);
    ys[i] = model(xs[i]);
    if (i > 0 && ys[i] < ys[i - 1]) ys[i] = ys[i - 1];
  }
  return MonotoneStepFunction(std::move(xs), std::move(ys));
}

}  // namespace stylescope
