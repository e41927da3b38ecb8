#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace stylescope {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// v / ||v||_2. Throws ValidationError for a zero (or non-finite) vector.
Eigen::VectorXd normalize_embedding(std::span<const float> v);
Eigen::VectorXd normalize_embedding(const Eigen::Ref<const Eigen::VectorXd>& v);

struct PcaBasis {
  Eigen::VectorXd mean;                // D
  RowMatrix components;                // d x D, orthonormal rows
  Eigen::VectorXd explained_variance;  // d, non-increasing
  double total_variance = 0.0;
  double retained_fraction = 0.0;

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
  std::size_t output_dim() const noexcept { return static_cast<std::size_t>(components.rows()); }

  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  RowMatrix project_rows(const RowMatrix& samples) const;
  Eigen::VectorXd reconstruct(const Eigen::Ref<const Eigen::VectorXd>& projected) const;
};

enum class PcaSolver {
  exact,       // dense eigendecomposition of the D x D covariance
  randomized,  // randomized range finder with power iterations; grows rank until `retain` is met
};

struct PcaOptions {
  double retain = 0.90;
  PcaSolver solver = PcaSolver::exact;
  std::uint64_t seed = 0;  // randomized solver only
  std::size_t power_iterations = 4;
  std::size_t oversample = 10;
};

/// Smallest d whose leading eigenvalues reach `retain` of `total`, with a
/// relative slack of 1e-12 so that retain = 1 is reachable in floating point.
std::size_t components_for_variance(std::span<const double> eigenvalues_desc, double total, double retain);

/// PCA on the rows of `samples` (n x D), covariance normalized by n - 1.
/// Component signs are fixed so each row's largest-magnitude entry is positive.
PcaBasis fit_pca(const RowMatrix& samples, const PcaOptions& options = {});

}  // namespace stylescope
