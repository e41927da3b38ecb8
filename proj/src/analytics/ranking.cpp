#include "stylescope/analytics/ranking.hpp"

#include <algorithm>
#include <cmath>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

double entropy(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("entropy: counts must be finite and non-negative");
    total += c;
  }
  if (total <= 0.0) throw ValidationError("entropy of an all-zero histogram");
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return std::max(h, 0.0);
}

RankMode parse_rank_mode(std::string_view text) {
  if (text == "cities") return RankMode::cities;
  if (text == "city-month") return RankMode::city_month;
  throw UsageError("unknown rank mode '" + std::string(text) + "' (expected cities or city-month)");
}

RankOrder parse_rank_order(std::string_view text) {
  if (text == "asc") return RankOrder::ascending;
  if (text == "desc") return RankOrder::descending;
  throw UsageError("unknown order '" + std::string(text) + "' (expected asc or desc)");
}

CountNormalization parse_count_normalization(std::string_view text) {
  if (text == "raw") return CountNormalization::raw;
  if (text == "per-city") return CountNormalization::per_city;
  throw UsageError("unknown count normalization '" + std::string(text) + "' (expected raw or per-city)");
}

const char* to_string(RankMode mode) { return mode == RankMode::cities ? "cities" : "city-month"; }
const char* to_string(RankOrder order) { return order == RankOrder::ascending ? "asc" : "desc"; }
const char* to_string(CountNormalization n) { return n == CountNormalization::raw ? "raw" : "per-city"; }

std::vector<ClusterHistogram> cluster_histograms(std::span<const ClusterAssignment> assignments,
                                                 std::span<const BinKey> bins, RankMode mode,
                                                 CountNormalization normalization) {
  if (assignments.size() != bins.size()) throw ValidationError("cluster histograms: assignments and bins differ in length");
  std::map<std::size_t, ClusterHistogram> by_cluster;
  std::map<std::string, double> city_totals;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (!bins[i].city) continue;
    const HistogramCell cell{*bins[i].city, mode == RankMode::city_month ? bins[i].month_index : 0};
    auto& h = by_cluster[assignments[i].cluster_id];
    h.cluster_id = assignments[i].cluster_id;
    h.counts[cell] += 1.0;
    city_totals[*bins[i].city] += 1.0;
  }
  std::vector<ClusterHistogram> out;
  out.reserve(by_cluster.size());
  for (auto& [id, h] : by_cluster) {
    if (normalization == CountNormalization::per_city) {
      for (auto& [cell, count] : h.counts) count /= city_totals.at(cell.first);
    }
    h.total = 0.0;
    for (const auto& [cell, count] : h.counts) h.total += count;
    out.push_back(std::move(h));
  }
  return out;
}

namespace {

void sort_ranking(std::vector<RankedCluster>& entries, bool descending) {
  std::sort(entries.begin(), entries.end(), [descending](const RankedCluster& a, const RankedCluster& b) {
    if (a.score != b.score) return descending ? a.score > b.score : a.score < b.score;
    return a.cluster_id < b.cluster_id;
  });
}

}  // namespace

ClusterRanking rank_clusters(std::span<const ClusterAssignment> assignments, std::span<const BinKey> bins,
                             RankMode mode, RankOrder order, CountNormalization normalization) {
  const auto histograms = cluster_histograms(assignments, bins, mode, normalization);
  if (histograms.empty()) throw ValidationError("rank clusters: no assigned records with a city");
  ClusterRanking ranking{"entropy", {}};
  std::vector<double> counts;
  for (const auto& h : histograms) {
    counts.clear();
    for (const auto& [cell, c] : h.counts) counts.push_back(c);
    ranking.entries.push_back({h.cluster_id, entropy(counts), h.total});
  }
  sort_ranking(ranking.entries, order == RankOrder::descending);
  return ranking;
}

ClusterRanking distinctiveness(std::span<const ClusterAssignment> assignments, std::span<const BinKey> bins,
                               std::string_view city, std::size_t cluster_count, double alpha) {
  if (assignments.size() != bins.size()) throw ValidationError("distinctiveness: assignments and bins differ in length");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("lift smoothing must be positive");
  std::size_t k_count = cluster_count;
  for (const auto& a : assignments) k_count = std::max(k_count, a.cluster_id + 1);
  if (k_count == 0) throw ValidationError("distinctiveness: no clusters");

  std::vector<double> in_city(k_count, 0.0), global(k_count, 0.0);
  double n_city = 0.0, n = 0.0;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (!bins[i].city) continue;
    global[assignments[i].cluster_id] += 1.0;
    n += 1.0;
    if (*bins[i].city == city) {
      in_city[assignments[i].cluster_id] += 1.0;
      n_city += 1.0;
    }
  }
  if (n_city == 0.0) throw ValidationError("unknown city (no assigned records): " + std::string(city));

  const double k = static_cast<double>(k_count);
  ClusterRanking ranking{"lift", {}};
  for (std::size_t id = 0; id < k_count; ++id) {
    // An empty cluster would score n / n_city purely from smoothing.
    if (global[id] == 0.0) continue;
    const double local_share = (in_city[id] + alpha) / (n_city + alpha * k);
    const double global_share = (global[id] + alpha) / (n + alpha * k);
    ranking.entries.push_back({id, local_share / global_share, in_city[id]});
  }
  sort_ranking(ranking.entries, true);
  return ranking;
}

std::string format_ranking(const ClusterRanking& ranking) {
  std::string out = "rank\tcluster_id\t" + ranking.score_kind + "\ttotal\n";
  std::size_t rank = 1;
  for (const auto& e : ranking.entries) {
    out += std::to_string(rank++) + '\t' + std::to_string(e.cluster_id) + '\t' + format_fixed(e.score, 6) + '\t' +
           format_double(e.total) + '\n';
  }
  return out;
}

}  // namespace stylescope
