#include "oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace oracle {

std::vector<double> repeated_pooling(std::span<const stylescope::IsotonicPoint> points) {
  struct Block {
    double sum;     // weighted outcome sum
    double weight;
    std::vector<std::size_t> members;
    double mean() const { return sum / weight; }
  };
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a].score < points[b].score; });

  std::vector<Block> blocks;
  for (std::size_t i : order) {
    const auto& p = points[i];
    if (!blocks.empty() && points[blocks.back().members.front()].score == p.score) {
      blocks.back().sum += p.weight * p.outcome;
      blocks.back().weight += p.weight;
      blocks.back().members.push_back(i);
    } else {
      blocks.push_back({p.weight * p.outcome, p.weight, {i}});
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j + 1 < blocks.size(); ++j) {
      if (blocks[j].mean() > blocks[j + 1].mean()) {
        blocks[j].sum += blocks[j + 1].sum;
        blocks[j].weight += blocks[j + 1].weight;
        blocks[j].members.insert(blocks[j].members.end(), blocks[j + 1].members.begin(), blocks[j + 1].members.end());
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        changed = true;
        break;
      }
    }
  }
  std::vector<double> fitted(points.size());
  for (const auto& b : blocks) {
    for (auto m : b.members) fitted[m] = b.mean();
  }
  return fitted;
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("label vectors differ in length");
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  const auto choose2 = [](double n) { return n * (n - 1) / 2; };
  double index = 0, sum_rows = 0, sum_cols = 0;
  for (const auto& [cell, n] : table) index += choose2(n);
  for (const auto& [r, n] : rows) sum_rows += choose2(n);
  for (const auto& [c, n] : cols) sum_cols += choose2(n);
  const double expected = sum_rows * sum_cols / choose2(static_cast<double>(a.size()));
  const double max_index = (sum_rows + sum_cols) / 2;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

std::vector<double> covariance_spectrum(const Eigen::MatrixXd& samples) {
  const auto n = samples.rows();
  const auto d = samples.cols();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) mean[static_cast<std::size_t>(j)] += samples(i, j);
    mean[static_cast<std::size_t>(j)] /= static_cast<double>(n);
  }
  Eigen::MatrixXd cov(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        s += (samples(i, a) - mean[static_cast<std::size_t>(a)]) * (samples(i, b) - mean[static_cast<std::size_t>(b)]);
      }
      cov(a, b) = cov(b, a) = s / static_cast<double>(n - 1);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov);
  const auto& sv = svd.singularValues();
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  std::sort(out.rbegin(), out.rend());
  return out;
}

std::size_t count_to_fraction(std::span<const double> eigenvalues_desc, double retain) {
  const double total = std::accumulate(eigenvalues_desc.begin(), eigenvalues_desc.end(), 0.0);
  double running = 0.0;
  for (std::size_t d = 0; d < eigenvalues_desc.size(); ++d) {
    running += eigenvalues_desc[d];
    if (running >= retain * total * (1.0 - 1e-12)) return d + 1;
  }
  return eigenvalues_desc.size();
}

double direct_entropy(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0) h += -(c / total) * std::log(c / total);
  }
  return h;
}

double direct_pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    dx += (x[i] - mx) * (x[i] - mx);
    dy += (y[i] - my) * (y[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("stylescope-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oracle
