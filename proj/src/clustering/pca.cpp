#include "stylescope/clustering/pca.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stylescope/core/error.hpp"
#include "stylescope/core/random.hpp"

namespace stylescope {

Eigen::VectorXd normalize_embedding(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("cannot normalize a zero or non-finite embedding");
  return v / norm;
}

Eigen::VectorXd normalize_embedding(std::span<const float> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Eigen::Index>(i)] = v[i];
  return normalize_embedding(x);
}

Eigen::VectorXd PcaBasis::project(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != mean.size()) throw ValidationError("pca: input dimension mismatch");
  return components * (x - mean);
}

RowMatrix PcaBasis::project_rows(const RowMatrix& samples) const {
  if (samples.cols() != mean.size()) throw ValidationError("pca: input dimension mismatch");
  return (samples.rowwise() - mean.transpose()) * components.transpose();
}

Eigen::VectorXd PcaBasis::reconstruct(const Eigen::Ref<const Eigen::VectorXd>& projected) const {
  return mean + components.transpose() * projected;
}

std::size_t components_for_variance(std::span<const double> eigenvalues_desc, double total, double retain) {
  const double target = retain * total * (1.0 - 1e-12);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < eigenvalues_desc.size(); ++i) {
    cumulative += eigenvalues_desc[i];
    if (cumulative >= target) return i + 1;
  }
  return eigenvalues_desc.size();
}

namespace {

void fix_signs(RowMatrix& components) {
  for (Eigen::Index r = 0; r < components.rows(); ++r) {
    Eigen::Index arg = 0;
    components.row(r).cwiseAbs().maxCoeff(&arg);
    if (components(r, arg) < 0.0) components.row(r) *= -1.0;
  }
}

struct Spectrum {
  std::vector<double> values;  // descending, clipped at 0
  RowMatrix vectors;           // one row per value
};

Spectrum exact_spectrum(const RowMatrix& centered, double denom) {
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericError("pca: eigendecomposition failed");
  const auto D = cov.rows();
  Spectrum s;
  s.values.resize(static_cast<std::size_t>(D));
  s.vectors.resize(D, D);
  for (Eigen::Index i = 0; i < D; ++i) {
    const Eigen::Index src = D - 1 - i;
    s.values[static_cast<std::size_t>(i)] = std::max(0.0, solver.eigenvalues()[src]);
    s.vectors.row(i) = solver.eigenvectors().col(src).transpose();
  }
  return s;
}

Spectrum randomized_spectrum(const RowMatrix& centered, double denom, std::size_t rank, const PcaOptions& opt) {
  const auto n = centered.rows();
  const auto D = centered.cols();
  const auto width = static_cast<Eigen::Index>(std::min<std::size_t>(rank + opt.oversample, std::min(n, D)));
  Rng rng(mix_seed(opt.seed, rank));
  Eigen::MatrixXd omega(D, width);
  for (Eigen::Index j = 0; j < width; ++j)
    for (Eigen::Index i = 0; i < D; ++i) omega(i, j) = rng.normal();

  auto orthonormalize = [](const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  };
  Eigen::MatrixXd q = orthonormalize(centered * omega);
  for (std::size_t it = 0; it < opt.power_iterations; ++it) {
    const Eigen::MatrixXd z = orthonormalize(centered.transpose() * q);
    q = orthonormalize(centered * z);
  }
  const Eigen::MatrixXd b = q.transpose() * centered;  // width x D
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinV);
  const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(rank, static_cast<std::size_t>(svd.singularValues().size())));
  Spectrum s;
  s.values.resize(static_cast<std::size_t>(k));
  s.vectors.resize(k, D);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double sv = svd.singularValues()[i];
    s.values[static_cast<std::size_t>(i)] = sv * sv / denom;
    s.vectors.row(i) = svd.matrixV().col(i).transpose();
  }
  return s;
}

}  // namespace

PcaBasis fit_pca(const RowMatrix& samples, const PcaOptions& options) {
  if (samples.rows() < 2) throw ValidationError("pca: need at least 2 samples");
  if (!(options.retain > 0.0 && options.retain <= 1.0)) throw UsageError("pca: retain must be in (0, 1]");
  if (!samples.allFinite()) throw ValidationError("pca: non-finite sample");

  PcaBasis basis;
  basis.mean = samples.colwise().mean().transpose();
  const RowMatrix centered = samples.rowwise() - basis.mean.transpose();
  const double denom = static_cast<double>(samples.rows() - 1);
  basis.total_variance = centered.squaredNorm() / denom;
  if (!(basis.total_variance > 0.0)) throw ValidationError("pca: samples have zero variance");

  const auto D = static_cast<std::size_t>(samples.cols());
  const auto max_rank = std::min(D, static_cast<std::size_t>(samples.rows()));
  Spectrum spectrum;
  if (options.solver == PcaSolver::exact) {
    spectrum = exact_spectrum(centered, denom);
  } else {
    std::size_t rank = std::min<std::size_t>(max_rank, 16);
    while (true) {
      spectrum = randomized_spectrum(centered, denom, rank, options);
      double captured = 0.0;
      for (double v : spectrum.values) captured += v;
      if (captured >= options.retain * basis.total_variance * (1.0 - 1e-12)) break;
      if (rank + options.oversample >= max_rank) {
        spectrum = exact_spectrum(centered, denom);
        break;
      }
      rank = std::min(max_rank, rank * 2);
    }
  }

  const std::size_t d = components_for_variance(spectrum.values, basis.total_variance, options.retain);
  basis.components = spectrum.vectors.topRows(static_cast<Eigen::Index>(d));
  fix_signs(basis.components);
  basis.explained_variance.resize(static_cast<Eigen::Index>(d));
  double kept = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    basis.explained_variance[static_cast<Eigen::Index>(i)] = spectrum.values[i];
    kept += spectrum.values[i];
  }
  basis.retained_fraction = std::min(1.0, kept / basis.total_variance);
  return basis;
}

}  // namespace stylescope
