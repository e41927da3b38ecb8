#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylescope/analytics/trends.hpp"

namespace stylescope {

inline constexpr std::size_t min_overlap_weeks = 3;

/// Pearson r, or nullopt with fewer than two pairs or a constant input.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

using WeeklyValues = std::map<std::int64_t, double>;

WeeklyValues weekly_values(const TrendSeries& series);

struct OverlapCorrelation {
  std::optional<double> r;  // nullopt when overlap < min_overlap or undefined
  std::size_t overlap = 0;
};

/// Pearson r over the weeks present in both series.
OverlapCorrelation overlap_correlation(const WeeklyValues& a, const WeeklyValues& b,
                                       std::size_t min_overlap = min_overlap_weeks);

struct CitySeries {
  std::string city;
  double latitude = 0.0;
  WeeklyValues values;
};

struct CorrelationMatrix {
  std::vector<std::string> cities;  // latitude descending, then name
  std::vector<double> latitudes;
  std::vector<std::vector<std::optional<double>>> r;  // nullopt = missing cell
  std::vector<std::vector<std::size_t>> overlap;
};

/// Pairwise correlations over overlapping weeks, rows ordered by latitude
/// (north first). The diagonal is 1. Requires at least two cities.
CorrelationMatrix city_correlation(std::span<const CitySeries> series, std::size_t min_overlap = min_overlap_weeks);

/// Tab-separated square matrix with a header row; missing cells are "NA".
std::string format_correlation(const CorrelationMatrix& matrix);

/// External (week, value) series: lines of `<week_index or YYYY-MM-DD> <TAB> value`;
/// dates map to weeks relative to `epoch`. Duplicate weeks are rejected.
WeeklyValues parse_external_series(std::string_view text, std::int64_t epoch, std::string_view source = "<series>");

}  // namespace stylescope
