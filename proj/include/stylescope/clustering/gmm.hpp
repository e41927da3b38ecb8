#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stylescope/clustering/pca.hpp"

namespace stylescope {

inline constexpr double default_variance_floor = 1e-6;

/// Mixture of K Gaussians with diagonal covariance.
struct GmmModel {
  Eigen::VectorXd weights;  // K, sums to 1
  RowMatrix means;          // K x d
  RowMatrix variances;      // K x d, every entry >= the variance floor

  std::size_t components() const noexcept { return static_cast<std::size_t>(weights.size()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(means.cols()); }

  /// log(w_k) + log N(x | mean_k, diag(var_k)) for every k.
  Eigen::VectorXd log_joint(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Posterior responsibilities (softmax of log_joint via log-sum-exp).
  Eigen::VectorXd posterior(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// log p(x) under the mixture.
  double log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// argmax posterior; ties go to the lowest component id.
  std::size_t predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

struct GmmOptions {
  std::size_t components = 400;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 200;
  double relative_tolerance = 1e-4;
  double variance_floor = default_variance_floor;
  /// A component whose responsibility mass falls below this is re-seeded.
  double empty_mass = 1e-8;
  std::size_t threads = 1;
};

struct GmmFit {
  GmmModel model;
  /// Mean per-point log-likelihood of each parameter set visited, starting
  /// with the initialization; the last entry belongs to `model`.
  std::vector<double> log_likelihood_trace;
  /// Trace indices whose parameters came from an M-step that re-seeded an
  /// empty component (the likelihood may drop across such a step).
  std::vector<std::size_t> reseeded_at;
  std::size_t iterations = 0;  // M-steps performed
  bool converged = false;
};

/// EM from k-means++ seeding. Deterministic for a given seed and independent
/// of `threads`: per-chunk partial sums are always reduced in chunk order.
/// Throws ValidationError for fewer points than components or non-finite input.
GmmFit fit_gmm(const RowMatrix& points, const GmmOptions& options);

/// Greedy k-means++ seeding (2 + ln k D^2-weighted candidates per step, the
/// one lowering the potential most is kept): indices of the chosen centers.
std::vector<std::size_t> kmeans_pp_seeds(const RowMatrix& points, std::size_t k, std::uint64_t seed);

/// Responsibilities for every row (n x K).
RowMatrix responsibilities(const GmmModel& model, const RowMatrix& points);

}  // namespace stylescope
