#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stylescope/clustering/gmm.hpp"
#include "stylescope/clustering/pca.hpp"
#include "stylescope/core/record.hpp"

namespace stylescope {

/// PCA basis plus mixture defining the style clusters.
struct StyleModel {
  PcaBasis basis;
  GmmModel gmm;
};

struct ClusterAssignment {
  std::string record_id;
  std::size_t cluster_id = 0;
  double distance = 0.0;  // Euclidean, to the cluster mean in PCA space

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

/// normalize -> project -> max-posterior component (ties to the lowest id).
ClusterAssignment assign(const PersonRecord& record, const StyleModel& model);
ClusterAssignment assign_embedding(std::string record_id, std::span<const float> embedding, const StyleModel& model);
/// Same, for a point already in PCA space.
ClusterAssignment assign_projected(std::string record_id, const Eigen::Ref<const Eigen::VectorXd>& projected,
                                   const GmmModel& gmm);

/// The `top_m` members of `cluster_id` nearest its mean, ascending by distance
/// then record id.
std::vector<std::string> cluster_exemplars(std::span<const ClusterAssignment> assignments, std::size_t cluster_id,
                                           std::size_t top_m);

/// Binary model file: "SSTYLEMD" magic, u32 version, u64 D, d, K, then
/// little-endian f64 arrays (retained fraction, total variance, mean,
/// components, explained variance, weights, means, variances).
void write_style_model(const StyleModel& model, const std::filesystem::path& path);
StyleModel read_style_model(const std::filesystem::path& path);

/// Assignment lines: record_id <TAB> cluster_id <TAB> distance.
std::string format_assignments(std::span<const ClusterAssignment> assignments);
std::vector<ClusterAssignment> parse_assignments(std::string_view text, std::string_view source = "<assignments>");

}  // namespace stylescope
