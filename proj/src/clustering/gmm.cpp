#include "stylescope/clustering/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stylescope/core/error.hpp"
#include "stylescope/core/parallel.hpp"
#include "stylescope/core/random.hpp"

namespace stylescope {

namespace {

constexpr std::size_t chunk_points = 1024;
constexpr std::size_t chunks_per_wave = 16;
constexpr std::size_t worst_tracked = 8;

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

/// Per-component constants for fast log-density evaluation.
struct Precomputed {
  RowMatrix inv_var;
  Eigen::VectorXd offset;  // log w_k - 0.5 * sum_j log(2 pi var_kj)

  explicit Precomputed(const GmmModel& m) : inv_var(m.variances.cwiseInverse()), offset(m.components()) {
    const double log2pi = std::log(2.0 * std::numbers::pi);
    for (Eigen::Index k = 0; k < m.weights.size(); ++k) {
      offset[k] = std::log(m.weights[k]) -
                  0.5 * (m.variances.row(k).array().log().sum() + log2pi * static_cast<double>(m.dim()));
    }
  }

  void log_joint(const GmmModel& m, const Eigen::Ref<const Eigen::RowVectorXd>& x, Eigen::VectorXd& out) const {
    for (Eigen::Index k = 0; k < out.size(); ++k) {
      out[k] = offset[k] - 0.5 * ((x - m.means.row(k)).array().square() * inv_var.row(k).array()).sum();
    }
  }
};

struct WorstPoint {
  double log_likelihood;
  std::size_t index;
  bool operator<(const WorstPoint& o) const {
    return log_likelihood < o.log_likelihood || (log_likelihood == o.log_likelihood && index < o.index);
  }
};

void keep_worst(std::vector<WorstPoint>& list, WorstPoint p) {
  list.insert(std::upper_bound(list.begin(), list.end(), p), p);
  if (list.size() > worst_tracked) list.pop_back();
}

struct Partial {
  Eigen::VectorXd mass;  // sum of responsibilities
  RowMatrix first;       // sum r (x - m_old)
  RowMatrix second;      // sum r (x - m_old)^2
  double log_likelihood = 0.0;
  std::vector<WorstPoint> worst;

  Partial(std::size_t k, std::size_t d)
      : mass(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k))),
        first(RowMatrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d))),
        second(RowMatrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d))) {}

  void merge(const Partial& o) {
    mass += o.mass;
    first += o.first;
    second += o.second;
    log_likelihood += o.log_likelihood;
    for (const auto& w : o.worst) keep_worst(worst, w);
  }
};

/// One E-step pass: sufficient statistics about the current means.
Partial expectation(const GmmModel& model, const RowMatrix& points, std::size_t threads) {
  const std::size_t n = static_cast<std::size_t>(points.rows());
  const std::size_t K = model.components(), d = model.dim();
  const Precomputed pre(model);
  Partial total(K, d);
  const std::size_t chunks = chunk_count(n, chunk_points);
  for (std::size_t wave = 0; wave < chunks; wave += chunks_per_wave) {
    const std::size_t wave_len = std::min(chunks_per_wave, chunks - wave);
    std::vector<Partial> partials(wave_len, Partial(K, d));
    parallel_for(wave_len, threads, [&](std::size_t i) {
      const std::size_t c = wave + i;
      const std::size_t begin = c * chunk_points, end = std::min(n, begin + chunk_points);
      Partial& p = partials[i];
      Eigen::VectorXd lj(static_cast<Eigen::Index>(K));
      Eigen::RowVectorXd diff(static_cast<Eigen::Index>(d));
      for (std::size_t r = begin; r < end; ++r) {
        const auto x = points.row(static_cast<Eigen::Index>(r));
        pre.log_joint(model, x, lj);
        const double ll = log_sum_exp(lj);
        p.log_likelihood += ll;
        keep_worst(p.worst, {ll, r});
        for (Eigen::Index k = 0; k < lj.size(); ++k) {
          const double resp = std::exp(lj[k] - ll);
          if (resp == 0.0) continue;
          diff = x - model.means.row(k);
          p.mass[k] += resp;
          p.first.row(k) += resp * diff;
          p.second.row(k) += resp * diff.cwiseProduct(diff);
        }
      }
    });
    for (const auto& p : partials) total.merge(p);
  }
  return total;
}

}  // namespace

Eigen::VectorXd GmmModel::log_joint(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw ValidationError("gmm: point dimension mismatch");
  Eigen::VectorXd out(weights.size());
  Precomputed(*this).log_joint(*this, x.transpose(), out);
  return out;
}

Eigen::VectorXd GmmModel::posterior(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXd lj = log_joint(x);
  return (lj.array() - log_sum_exp(lj)).exp();
}

double GmmModel::log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& x) const { return log_sum_exp(log_joint(x)); }

std::size_t GmmModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXd lj = log_joint(x);
  std::size_t best = 0;
  for (Eigen::Index k = 1; k < lj.size(); ++k) {
    if (lj[k] > lj[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(k);
  }
  return best;
}

std::vector<std::size_t> kmeans_pp_seeds(const RowMatrix& points, std::size_t k, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k == 0 || k > n) throw ValidationError("k-means++: need 1 <= k <= number of points");
  Rng rng(seed);
  const auto sq_dist_to = [&](std::size_t c, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(c))).squaredNorm();
    }
  };
  std::vector<std::size_t> centers{rng.uniform_index(n)};
  std::vector<double> dist(n), candidate(n), best(n);
  sq_dist_to(centers[0], dist);
  // Greedy variant: draw several D^2-weighted candidates per step and keep the
  // one that lowers the potential most. Plain k-means++ often doubles up on
  // one well-separated blob and EM cannot recover from that.
  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  while (centers.size() < k) {
    double total = 0.0;
    for (double v : dist) total += v;
    if (total <= 0.0) {
      centers.push_back(rng.uniform_index(n));
      continue;
    }
    std::size_t chosen = n;
    double chosen_potential = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t c = rng.categorical(dist);
      sq_dist_to(c, candidate);
      double potential = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate[i] = std::min(candidate[i], dist[i]);
        potential += candidate[i];
      }
      if (chosen == n || potential < chosen_potential) {
        chosen = c;
        chosen_potential = potential;
        best.swap(candidate);
      }
    }
    centers.push_back(chosen);
    dist.swap(best);
  }
  return centers;
}

namespace {

GmmModel initial_model(const RowMatrix& points, const GmmOptions& opt, const Eigen::RowVectorXd& global_var) {
  const auto n = points.rows();
  const auto d = points.cols();
  const auto K = static_cast<Eigen::Index>(opt.components);
  const auto seeds = kmeans_pp_seeds(points, opt.components, opt.seed);

  RowMatrix centers(K, d);
  for (Eigen::Index k = 0; k < K; ++k) centers.row(k) = points.row(static_cast<Eigen::Index>(seeds[static_cast<std::size_t>(k)]));

  // Hard assignment to the nearest seed gives the starting moments.
  Eigen::VectorXd count = Eigen::VectorXd::Zero(K);
  RowMatrix sum = RowMatrix::Zero(K, d), sum_sq = RowMatrix::Zero(K, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    (centers.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
    count[best] += 1.0;
    sum.row(best) += points.row(i);
    sum_sq.row(best) += points.row(i).cwiseProduct(points.row(i));
  }

  GmmModel m;
  m.weights = count / static_cast<double>(n);
  m.means = centers;
  m.variances = RowMatrix(K, d);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (count[k] >= 2.0) {
      m.means.row(k) = sum.row(k) / count[k];
      m.variances.row(k) = (sum_sq.row(k) / count[k] - m.means.row(k).cwiseProduct(m.means.row(k))).cwiseMax(opt.variance_floor);
    } else {
      m.variances.row(k) = global_var.cwiseMax(opt.variance_floor);
    }
    if (count[k] == 0.0) m.weights[k] = 1.0 / static_cast<double>(n);
  }
  m.weights /= m.weights.sum();
  return m;
}

}  // namespace

GmmFit fit_gmm(const RowMatrix& points, const GmmOptions& opt) {
  if (opt.components == 0) throw UsageError("gmm: need at least one component");
  if (static_cast<std::size_t>(points.rows()) < opt.components) {
    throw ValidationError("gmm: " + std::to_string(points.rows()) + " points is fewer than K = " +
                          std::to_string(opt.components));
  }
  if (points.cols() == 0) throw ValidationError("gmm: zero-dimensional points");
  if (!points.allFinite()) throw ValidationError("gmm: non-finite input");
  if (!(opt.variance_floor > 0.0)) throw UsageError("gmm: variance floor must be > 0");

  const auto n = static_cast<double>(points.rows());
  const Eigen::RowVectorXd global_mean = points.colwise().mean();
  const Eigen::RowVectorXd global_var = (points.rowwise() - global_mean).array().square().colwise().sum() / n;

  GmmFit fit;
  fit.model = initial_model(points, opt, global_var);
  bool reseeded_last = false;
  for (std::size_t iter = 0;; ++iter) {
    const Partial stats = expectation(fit.model, points, opt.threads);
    const double mean_ll = stats.log_likelihood / n;
    if (!std::isfinite(mean_ll)) throw NumericError("gmm: log-likelihood is not finite");
    fit.log_likelihood_trace.push_back(mean_ll);
    if (iter > 0 && !reseeded_last) {
      const double prev = fit.log_likelihood_trace[iter - 1];
      if (mean_ll - prev < opt.relative_tolerance * std::max(std::abs(prev), 1e-300)) {
        fit.converged = true;
        break;
      }
    }
    if (iter == opt.max_iterations) break;

    // M-step
    GmmModel next = fit.model;
    std::vector<Eigen::Index> empty;
    for (Eigen::Index k = 0; k < stats.mass.size(); ++k) {
      const double mass = stats.mass[k];
      if (mass < opt.empty_mass) {
        empty.push_back(k);
        continue;
      }
      const Eigen::RowVectorXd shift = stats.first.row(k) / mass;
      next.weights[k] = mass / n;
      next.means.row(k) = fit.model.means.row(k) + shift;
      next.variances.row(k) = (stats.second.row(k) / mass - shift.cwiseProduct(shift)).cwiseMax(opt.variance_floor);
    }
    for (std::size_t e = 0; e < empty.size(); ++e) {
      const Eigen::Index k = empty[e];
      const auto& worst = stats.worst;
      const std::size_t src = worst[std::min(e, worst.size() - 1)].index;
      next.weights[k] = 1.0 / n;
      next.means.row(k) = points.row(static_cast<Eigen::Index>(src));
      next.variances.row(k) = global_var.cwiseMax(opt.variance_floor);
    }
    next.weights /= next.weights.sum();
    reseeded_last = !empty.empty();
    if (reseeded_last) fit.reseeded_at.push_back(iter + 1);
    fit.model = std::move(next);
    ++fit.iterations;
  }
  return fit;
}

RowMatrix responsibilities(const GmmModel& model, const RowMatrix& points) {
  RowMatrix out(points.rows(), static_cast<Eigen::Index>(model.components()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) out.row(i) = model.posterior(points.row(i).transpose()).transpose();
  return out;
}

}  // namespace stylescope
