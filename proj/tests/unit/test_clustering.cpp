#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "stylescope/clustering/gmm.hpp"
#include "stylescope/clustering/pca.hpp"
#include "stylescope/clustering/style_model.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/random.hpp"

using namespace stylescope;

namespace {

RowMatrix gaussian(Rng& rng, std::size_t n, std::size_t d, double sd = 1.0) {
  RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = sd * rng.normal();
  }
  return m;
}

double reconstruction_variance(const PcaBasis& basis, const RowMatrix& x) {
  double sse = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd row = x.row(i).transpose();
    sse += (basis.reconstruct(basis.project(row)) - row).squaredNorm();
  }
  return sse / static_cast<double>(x.rows() - 1);
}

struct Planted {
  RowMatrix points;
  std::vector<std::size_t> labels;
};

Planted two_blobs(Rng& rng, std::size_t n) {
  Planted p{RowMatrix(static_cast<Eigen::Index>(n), 2), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = rng.uniform_index(2);
    p.labels.push_back(k);
    p.points(static_cast<Eigen::Index>(i), 0) = (k == 0 ? -5.0 : 5.0) + rng.normal();
    p.points(static_cast<Eigen::Index>(i), 1) = rng.normal();
  }
  return p;
}

}  // namespace

TEST_CASE("embedding normalization") {
  std::vector<float> v{3.0f, 4.0f};
  const auto u = normalize_embedding(v);
  CHECK(u(0) == doctest::Approx(0.6));
  CHECK(u(1) == doctest::Approx(0.8));
  CHECK((normalize_embedding(Eigen::VectorXd(u)) - u).norm() < 1e-15);
  std::vector<float> zero{0.0f, 0.0f};
  CHECK_THROWS_AS(normalize_embedding(zero), ValidationError);
  std::vector<float> nan{std::nanf(""), 1.0f};
  CHECK_THROWS_AS(normalize_embedding(nan), ValidationError);
}

TEST_CASE("pca on planar data keeps two components") {
  Rng rng(1);
  RowMatrix x(200, 3);
  for (Eigen::Index i = 0; i < 200; ++i) {
    const double a = rng.normal() * 3, b = rng.normal();
    x.row(i) << a + b, a - 2 * b, 2 * a + 0.5 * b;
  }
  const auto basis = fit_pca(x, {0.99});
  CHECK(basis.output_dim() == 2);
  CHECK(reconstruction_variance(basis, x) < 1e-9);
}

TEST_CASE("pca on an isotropic sample matches the covariance oracle") {
  Rng rng(2);
  const auto x = gaussian(rng, 10000, 10);
  const auto spectrum = oracle::covariance_spectrum(Eigen::MatrixXd(x));
  const auto expected_d = oracle::count_to_fraction(spectrum, 0.90);
  CHECK(expected_d == 9);
  for (auto solver : {PcaSolver::exact, PcaSolver::randomized}) {
    PcaOptions opt;
    opt.solver = solver;
    opt.seed = 5;
    const auto basis = fit_pca(x, opt);
    CHECK(basis.output_dim() == expected_d);
    for (std::size_t k = 0; k < basis.output_dim(); ++k) {
      CHECK(basis.explained_variance(static_cast<Eigen::Index>(k)) == doctest::Approx(spectrum[k]).epsilon(1e-6));
    }
  }
}

TEST_CASE("full retention keeps min(n - 1, D) components") {
  Rng rng(3);
  CHECK(fit_pca(gaussian(rng, 50, 8), {1.0}).output_dim() == 8);
  CHECK(fit_pca(gaussian(rng, 5, 8), {1.0}).output_dim() == 4);
  CHECK_THROWS_AS(fit_pca(gaussian(rng, 1, 8), {0.9}), ValidationError);
  CHECK_THROWS_AS(fit_pca(gaussian(rng, 10, 8), {0.0}), UsageError);
  CHECK_THROWS_AS(fit_pca(gaussian(rng, 10, 8), {1.5}), UsageError);
}

TEST_CASE("pca basis properties") {
  Rng rng(4);
  RowMatrix x = gaussian(rng, 2000, 12);
  for (Eigen::Index j = 0; j < 12; ++j) x.col(j) *= 1.0 / (1.0 + static_cast<double>(j));
  for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i).array() += 0.3;
  for (double retain : {0.5, 0.8, 0.9, 0.99}) {
    for (auto solver : {PcaSolver::exact, PcaSolver::randomized}) {
      PcaOptions opt{retain, solver, 9};
      const auto b = fit_pca(x, opt);
      const auto d = static_cast<Eigen::Index>(b.output_dim());
      const Eigen::MatrixXd gram = b.components * b.components.transpose();
      CHECK((gram - Eigen::MatrixXd::Identity(d, d)).norm() < 1e-9);
      for (Eigen::Index k = 1; k < d; ++k) CHECK(b.explained_variance(k) <= b.explained_variance(k - 1));
      for (Eigen::Index k = 0; k < d; ++k) {
        Eigen::Index arg = 0;
        b.components.row(k).cwiseAbs().maxCoeff(&arg);
        CHECK(b.components(k, arg) > 0);
      }
      CHECK(b.retained_fraction >= retain - 1e-12);
      const double discarded = (1.0 - b.retained_fraction) * b.total_variance;
      CHECK(std::abs(reconstruction_variance(b, x) - discarded) < 1e-6);
      const auto spectrum = oracle::covariance_spectrum(Eigen::MatrixXd(x));
      CHECK(b.output_dim() == oracle::count_to_fraction(spectrum, retain));
    }
  }
}

TEST_CASE("pca is deterministic") {
  Rng rng(6);
  const auto x = gaussian(rng, 300, 20);
  const auto a = fit_pca(x, {0.9, PcaSolver::randomized, 4});
  const auto b = fit_pca(x, {0.9, PcaSolver::randomized, 4});
  CHECK(a.components == b.components);
  CHECK(components_for_variance(std::vector<double>{5, 3, 2}, 10.0, 0.8) == 2);
  CHECK(components_for_variance(std::vector<double>{5, 3, 2}, 10.0, 1.0) == 3);
}

TEST_CASE("gmm recovers two planted gaussians") {
  Rng rng(7);
  const auto p = two_blobs(rng, 1000);
  GmmOptions opt;
  opt.components = 2;
  opt.seed = 3;
  const auto fit = fit_gmm(p.points, opt);
  std::vector<std::size_t> predicted;
  for (Eigen::Index i = 0; i < p.points.rows(); ++i) predicted.push_back(fit.model.predict(p.points.row(i).transpose()));
  CHECK(oracle::adjusted_rand_index(predicted, p.labels) >= 0.99);
  const Eigen::Index left = fit.model.means(0, 0) < 0 ? 0 : 1;
  CHECK(std::abs(fit.model.means(left, 0) + 5.0) < 0.2);
  CHECK(std::abs(fit.model.means(1 - left, 0) - 5.0) < 0.2);
  CHECK(std::abs(fit.model.means(left, 1)) < 0.2);
}

TEST_CASE("single-component gmm is the sample mean and variance") {
  Rng rng(8);
  RowMatrix x = gaussian(rng, 500, 3, 2.0);
  GmmOptions opt;
  opt.components = 1;
  const auto fit = fit_gmm(x, opt);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::RowVectorXd var = (x.rowwise() - mean).array().square().colwise().mean();
  CHECK((fit.model.means.row(0) - mean).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((fit.model.variances.row(0) - var).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(fit.model.weights(0) == doctest::Approx(1.0));
}

TEST_CASE("gmm likelihood trace, weights and floor") {
  Rng rng(9);
  RowMatrix x = gaussian(rng, 2000, 4);
  // Duplicate points force the variance floor.
  for (Eigen::Index i = 0; i < 50; ++i) x.row(i) = Eigen::RowVectorXd::Constant(4, 7.0);
  GmmOptions opt;
  opt.components = 6;
  opt.seed = 1;
  opt.relative_tolerance = 1e-9;
  const auto fit = fit_gmm(x, opt);
  for (std::size_t t = 1; t < fit.log_likelihood_trace.size(); ++t) {
    const bool reseeded =
        std::find(fit.reseeded_at.begin(), fit.reseeded_at.end(), t) != fit.reseeded_at.end();
    if (!reseeded) CHECK(fit.log_likelihood_trace[t] >= fit.log_likelihood_trace[t - 1] - 1e-8);
  }
  CHECK(fit.model.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.model.variances.minCoeff() >= default_variance_floor);
  const auto r = responsibilities(fit.model, x);
  for (Eigen::Index i = 0; i < r.rows(); ++i) CHECK(std::abs(r.row(i).sum() - 1.0) < 1e-9);
}

TEST_CASE("gmm is deterministic across thread counts") {
  Rng rng(10);
  const auto x = gaussian(rng, 3000, 5);
  GmmOptions opt;
  opt.components = 5;
  opt.seed = 42;
  opt.threads = 1;
  const auto a = fit_gmm(x, opt);
  opt.threads = 4;
  const auto b = fit_gmm(x, opt);
  CHECK(a.model.means == b.model.means);
  CHECK(a.model.variances == b.model.variances);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.log_likelihood_trace == b.log_likelihood_trace);
  opt.seed = 43;
  CHECK_FALSE(fit_gmm(x, opt).model.means == a.model.means);
}

TEST_CASE("gmm input validation") {
  Rng rng(11);
  GmmOptions opt;
  opt.components = 10;
  CHECK_THROWS_AS(fit_gmm(gaussian(rng, 5, 2), opt), ValidationError);
  RowMatrix bad = gaussian(rng, 20, 2);
  bad(3, 1) = std::numeric_limits<double>::infinity();
  opt.components = 2;
  CHECK_THROWS_AS(fit_gmm(bad, opt), ValidationError);
  const auto seeds = kmeans_pp_seeds(gaussian(rng, 30, 2), 5, 1);
  CHECK(seeds.size() == 5);
  CHECK(std::set<std::size_t>(seeds.begin(), seeds.end()).size() == 5);
}

TEST_CASE("assignment follows the posterior with ties to the lowest id") {
  GmmModel g;
  g.weights = Eigen::VectorXd::Constant(2, 0.5);
  g.means = RowMatrix(2, 2);
  g.means << -1, 0, 1, 0;
  g.variances = RowMatrix::Constant(2, 2, 0.1);
  CHECK(assign_projected("a", Eigen::Vector2d(0, 0.3), g).cluster_id == 0);
  const auto at = assign_projected("b", Eigen::Vector2d(1, 0), g);
  CHECK(at.cluster_id == 1);
  CHECK(at.distance == doctest::Approx(0.0));
  CHECK(assign_projected("c", Eigen::Vector2d(-0.2, 0), g).distance == doctest::Approx(0.8));
}

TEST_CASE("assignment is invariant to embedding scale") {
  Rng rng(12);
  RowMatrix x(400, 6);
  std::vector<std::vector<float>> raw;
  for (Eigen::Index i = 0; i < 400; ++i) {
    std::vector<float> v(6);
    for (std::size_t j = 0; j < 6; ++j) v[j] = static_cast<float>(rng.normal() + (i % 2 ? 3.0 : -3.0) * (j == 0));
    x.row(i) = normalize_embedding(v).transpose();
    raw.push_back(v);
  }
  StyleModel model;
  model.basis = fit_pca(x, {0.9});
  GmmOptions opt;
  opt.components = 3;
  model.gmm = fit_gmm(model.basis.project_rows(x), opt).model;
  for (const auto& v : raw) {
    std::vector<float> scaled = v;
    for (auto& f : scaled) f *= 2.0f;
    CHECK(assign_embedding("x", v, model).cluster_id == assign_embedding("x", scaled, model).cluster_id);
  }
  std::vector<float> wrong(5, 1.0f);
  CHECK_THROWS_AS(assign_embedding("x", wrong, model), ValidationError);
  std::vector<float> zero(6, 0.0f);
  CHECK_THROWS_AS(assign_embedding("x", zero, model), ValidationError);
}

TEST_CASE("exemplars are the nearest members") {
  const std::vector<ClusterAssignment> a{{"a", 1, 0.1}, {"b", 1, 0.3}, {"c", 1, 0.2}, {"d", 0, 0.0}, {"e", 1, 0.2}};
  CHECK(cluster_exemplars(a, 1, 2) == std::vector<std::string>{"a", "c"});
  CHECK(cluster_exemplars(a, 1, 3) == std::vector<std::string>{"a", "c", "e"});
  CHECK(cluster_exemplars(a, 0, 10) == std::vector<std::string>{"d"});
  CHECK(cluster_exemplars(a, 5, 3).empty());
}

TEST_CASE("style model and assignments round trip") {
  oracle::TempDir tmp("clustering-rt");
  Rng rng(13);
  const auto x = gaussian(rng, 300, 8);
  StyleModel model;
  model.basis = fit_pca(x, {0.8});
  GmmOptions opt;
  opt.components = 3;
  model.gmm = fit_gmm(model.basis.project_rows(x), opt).model;
  write_style_model(model, tmp / "m.bin");
  const auto back = read_style_model(tmp / "m.bin");
  CHECK(back.basis.mean == model.basis.mean);
  CHECK(back.basis.components == model.basis.components);
  CHECK(back.basis.explained_variance == model.basis.explained_variance);
  CHECK(back.basis.retained_fraction == model.basis.retained_fraction);
  CHECK(back.gmm.weights == model.gmm.weights);
  CHECK(back.gmm.means == model.gmm.means);
  CHECK(back.gmm.variances == model.gmm.variances);

  auto bytes = oracle::slurp(tmp / "m.bin");
  {
    std::ofstream(tmp / "bad.bin", std::ios::binary) << "NOTAMODEL" << bytes.substr(9);
  }
  CHECK_THROWS_AS(read_style_model(tmp / "bad.bin"), ValidationError);
  {
    std::ofstream(tmp / "trail.bin", std::ios::binary) << bytes << "x";
  }
  CHECK_THROWS_AS(read_style_model(tmp / "trail.bin"), ValidationError);
  {
    std::ofstream(tmp / "short.bin", std::ios::binary) << bytes.substr(0, bytes.size() - 8);
  }
  CHECK_THROWS_AS(read_style_model(tmp / "short.bin"), ValidationError);

  const std::vector<ClusterAssignment> a{{"p1", 3, 0.25}, {"p2", 0, 1.5}};
  const auto parsed = parse_assignments(format_assignments(a));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].record_id == "p1");
  CHECK(parsed[0].cluster_id == 3);
  CHECK(parsed[1].distance == doctest::Approx(1.5));
  CHECK_THROWS_AS(parse_assignments("p1\tx\t0.1\n"), ValidationError);
}
