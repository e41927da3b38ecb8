#include "stylescope/clustering/style_model.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

ClusterAssignment assign_projected(std::string record_id, const Eigen::Ref<const Eigen::VectorXd>& projected,
                                   const GmmModel& gmm) {
  const std::size_t k = gmm.predict(projected);
  const double distance = (projected.transpose() - gmm.means.row(static_cast<Eigen::Index>(k))).norm();
  return {std::move(record_id), k, distance};
}

ClusterAssignment assign_embedding(std::string record_id, std::span<const float> embedding, const StyleModel& model) {
  if (embedding.size() != model.basis.input_dim()) {
    throw ValidationError("record '" + record_id + "': embedding dimension " + std::to_string(embedding.size()) +
                          " does not match the style model (" + std::to_string(model.basis.input_dim()) + ")");
  }
  const Eigen::VectorXd unit = normalize_embedding(embedding);
  return assign_projected(std::move(record_id), model.basis.project(unit), model.gmm);
}

ClusterAssignment assign(const PersonRecord& record, const StyleModel& model) {
  return assign_embedding(record.record_id, record.embedding, model);
}

std::vector<std::string> cluster_exemplars(std::span<const ClusterAssignment> assignments, std::size_t cluster_id,
                                           std::size_t top_m) {
  std::vector<const ClusterAssignment*> members;
  for (const auto& a : assignments) {
    if (a.cluster_id == cluster_id) members.push_back(&a);
  }
  const auto m = std::min(top_m, members.size());
  std::partial_sort(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(m), members.end(),
                    [](const ClusterAssignment* a, const ClusterAssignment* b) {
                      if (a->distance != b->distance) return a->distance < b->distance;
                      return a->record_id < b->record_id;
                    });
  std::vector<std::string> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(members[i]->record_id);
  return out;
}

namespace {

constexpr char magic[8] = {'S', 'S', 'T', 'Y', 'L', 'E', 'M', 'D'};
constexpr std::uint32_t format_version = 1;

class LeWriter {
 public:
  explicit LeWriter(std::ofstream& out) : out_(out) {}
  void u32(std::uint32_t v) { bytes(v, 4); }
  void u64(std::uint64_t v) { bytes(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  template <class M>
  void matrix(const M& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) f64(m(i, j));
  }

 private:
  void bytes(std::uint64_t v, int n) {
    char buf[8];
    for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out_.write(buf, n);
  }
  std::ofstream& out_;
};

class LeReader {
 public:
  LeReader(std::ifstream& in, std::string path) : in_(in), path_(std::move(path)) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(bytes(4)); }
  std::uint64_t u64() { return bytes(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  template <class M>
  void matrix(M& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = f64();
  }

 private:
  std::uint64_t bytes(int n) {
    unsigned char buf[8];
    if (!in_.read(reinterpret_cast<char*>(buf), n)) throw ValidationError("style model truncated: " + path_);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
    return v;
  }
  std::ifstream& in_;
  std::string path_;
};

}  // namespace

void write_style_model(const StyleModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io_error("cannot write style model", path.string());
  out.write(magic, sizeof magic);
  LeWriter w(out);
  w.u32(format_version);
  w.u64(model.basis.input_dim());
  w.u64(model.basis.output_dim());
  w.u64(model.gmm.components());
  w.f64(model.basis.retained_fraction);
  w.f64(model.basis.total_variance);
  w.matrix(model.basis.mean);
  w.matrix(model.basis.components);
  w.matrix(model.basis.explained_variance);
  w.matrix(model.gmm.weights);
  w.matrix(model.gmm.means);
  w.matrix(model.gmm.variances);
  if (!out) throw_io_error("write failed", path.string());
}

StyleModel read_style_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io_error("cannot open style model", path.string());
  char header[sizeof magic];
  if (!in.read(header, sizeof header) || std::memcmp(header, magic, sizeof magic) != 0) {
    throw ValidationError("not a style model file: " + path.string());
  }
  LeReader r(in, path.string());
  if (const auto v = r.u32(); v != format_version) {
    throw ValidationError("unsupported style model version " + std::to_string(v) + ": " + path.string());
  }
  const auto D = static_cast<Eigen::Index>(r.u64());
  const auto d = static_cast<Eigen::Index>(r.u64());
  const auto K = static_cast<Eigen::Index>(r.u64());
  if (D <= 0 || d <= 0 || K <= 0 || d > D || D > (1 << 20) || K > (1 << 20)) {
    throw ValidationError("style model has implausible dimensions: " + path.string());
  }
  StyleModel m;
  m.basis.retained_fraction = r.f64();
  m.basis.total_variance = r.f64();
  m.basis.mean.resize(D);
  m.basis.components.resize(d, D);
  m.basis.explained_variance.resize(d);
  m.gmm.weights.resize(K);
  m.gmm.means.resize(K, d);
  m.gmm.variances.resize(K, d);
  r.matrix(m.basis.mean);
  r.matrix(m.basis.components);
  r.matrix(m.basis.explained_variance);
  r.matrix(m.gmm.weights);
  r.matrix(m.gmm.means);
  r.matrix(m.gmm.variances);
  if (in.peek() != std::char_traits<char>::eof()) throw ValidationError("trailing bytes in style model: " + path.string());
  return m;
}

std::string format_assignments(std::span<const ClusterAssignment> assignments) {
  std::string out = "# record_id\tcluster_id\tdistance\n";
  for (const auto& a : assignments) {
    out += a.record_id + '\t' + std::to_string(a.cluster_id) + '\t' + format_double(a.distance) + '\n';
  }
  return out;
}

std::vector<ClusterAssignment> parse_assignments(std::string_view text, std::string_view source) {
  std::vector<ClusterAssignment> out;
  std::size_t line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 3) {
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": expected 3 tab-separated fields");
    }
    out.push_back({f[0], static_cast<std::size_t>(parse_uint(f[1], "cluster_id")), parse_double(f[2], "distance")});
  }
  return out;
}

}  // namespace stylescope
