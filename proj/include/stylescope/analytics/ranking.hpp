#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stylescope/clustering/style_model.hpp"
#include "stylescope/ingestion/binning.hpp"

namespace stylescope {

/// Shannon entropy (natural log) of a histogram; zero bins contribute 0.
/// Throws ValidationError for negative or all-zero counts.
double entropy(std::span<const double> counts);

enum class RankMode { cities, city_month };
enum class RankOrder { ascending, descending };
/// raw: counts as given. per_city: each cell divided by its city's total over
/// all clusters, so populous cities do not dominate.
enum class CountNormalization { raw, per_city };

RankMode parse_rank_mode(std::string_view text);  // "cities" | "city-month"
RankOrder parse_rank_order(std::string_view text);  // "asc" | "desc"
CountNormalization parse_count_normalization(std::string_view text);  // "raw" | "per-city"
const char* to_string(RankMode mode);
const char* to_string(RankOrder order);
const char* to_string(CountNormalization normalization);

/// (city, month_index); month is 0 in cities mode.
using HistogramCell = std::pair<std::string, std::int64_t>;

struct ClusterHistogram {
  std::size_t cluster_id = 0;
  std::map<HistogramCell, double> counts;
  double total = 0.0;
};

/// One histogram per cluster that has members with a city, ascending id.
/// `bins` is parallel to `assignments`; records without a city are skipped.
std::vector<ClusterHistogram> cluster_histograms(std::span<const ClusterAssignment> assignments,
                                                 std::span<const BinKey> bins, RankMode mode,
                                                 CountNormalization normalization = CountNormalization::raw);

struct RankedCluster {
  std::size_t cluster_id = 0;
  double score = 0.0;
  double total = 0.0;  // histogram mass (raw: member count)

  friend bool operator==(const RankedCluster&, const RankedCluster&) = default;
};

struct ClusterRanking {
  std::string score_kind;  // "entropy" or "lift"
  std::vector<RankedCluster> entries;
};

/// Clusters ordered by histogram entropy; ties always go to the lower id.
ClusterRanking rank_clusters(std::span<const ClusterAssignment> assignments, std::span<const BinKey> bins,
                             RankMode mode, RankOrder order = RankOrder::ascending,
                             CountNormalization normalization = CountNormalization::raw);

inline constexpr double default_lift_smoothing = 1.0;

/// Per-cluster lift of `city` against all city-assigned records:
///   ((c_k,city + a) / (n_city + aK)) / ((c_k + a) / (n + aK))
/// over cluster ids [0, cluster_count), descending lift then ascending id.
/// K counts every id; clusters with no city-assigned members are not ranked.
/// Throws if the city has no assigned records.
ClusterRanking distinctiveness(std::span<const ClusterAssignment> assignments, std::span<const BinKey> bins,
                               std::string_view city, std::size_t cluster_count,
                               double alpha = default_lift_smoothing);

/// Columns: rank, cluster_id, score, total.
std::string format_ranking(const ClusterRanking& ranking);

}  // namespace stylescope
