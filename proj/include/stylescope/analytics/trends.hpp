#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylescope/calibration/calibration.hpp"
#include "stylescope/core/record.hpp"
#include "stylescope/ingestion/binning.hpp"

namespace stylescope {

inline constexpr std::size_t default_min_bin_count = 50;
inline constexpr double z_95 = 1.959963984540054;

struct TrendPoint {
  std::int64_t week_index = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;

  friend bool operator==(const TrendPoint&, const TrendPoint&) = default;
};

struct TrendSeries {
  std::string attribute;
  std::string class_label;
  std::string region;  // "all", "city:<name>" or "country:<CC>"
  std::vector<TrendPoint> points;  // ascending week_index
};

/// One calibrated probability observed in a given week.
struct Observation {
  std::int64_t week_index = 0;
  double value = 0.0;
};

struct MeanInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Normal-approximation 95% interval, mean +/- z * s / sqrt(n) with the n - 1
/// sample deviation, clamped to [0, 1]. Requires at least one value.
MeanInterval mean_interval(std::span<const double> values);

/// Groups observations by week; weeks with fewer than `min_n` are dropped.
std::vector<TrendPoint> weekly_points(std::span<const Observation> observations, std::size_t min_n);

struct RegionFilter {
  std::optional<std::string> city;
  std::optional<std::string> country;

  std::string describe() const;
};

/// Weekly mean calibrated probability of (attribute, class) over the records
/// passing `filter`. `bins` is parallel to `records`. Records without scores
/// for the attribute are skipped. Throws when the model lacks the class or
/// nothing survives the filter.
TrendSeries weekly_series(std::span<const PersonRecord> records, std::span<const BinKey> bins,
                          std::string_view attribute, std::string_view class_label, const CalibrationModel& model,
                          const RegionFilter& filter = {}, std::size_t min_n = default_min_bin_count,
                          std::size_t threads = 1);

/// Columns: week_index, mean, ci_low, ci_high, n.
std::string format_series(const TrendSeries& series);

struct CountryMean {
  std::string country;
  double mean = 0.0;
  std::size_t n = 0;
};

struct CountryAggregate {
  std::vector<CountryMean> included;  // n >= min_photos, by country code
  std::vector<CountryMean> excluded;  // below the floor, by country code
};

inline constexpr std::size_t default_min_country_photos = 1000;

/// Per-country mean calibrated probability. Records lacking a country code or
/// the attribute's scores are ignored; throws if no record has a country.
CountryAggregate country_aggregate(std::span<const PersonRecord> records, std::string_view attribute,
                                   std::string_view class_label, const CalibrationModel& model,
                                   std::size_t min_photos = default_min_country_photos);

/// Columns: country, mean, n, included (0/1).
std::string format_country_aggregate(const CountryAggregate& aggregate);

}  // namespace stylescope
