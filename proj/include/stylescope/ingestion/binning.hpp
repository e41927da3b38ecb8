#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "stylescope/core/cities.hpp"
#include "stylescope/core/record.hpp"

namespace stylescope {

inline constexpr std::int64_t seconds_per_week = 604800;
/// 2013-06-01T00:00:00Z, the start of the photo collection window.
inline constexpr std::int64_t default_epoch = 1370044800;

struct BinKey {
  std::optional<std::string> city;
  std::int64_t week_index = 0;   // floor((t - epoch) / 604800)
  std::int64_t month_index = 0;  // UTC calendar months between epoch and t

  friend bool operator==(const BinKey&, const BinKey&) = default;
  friend auto operator<=>(const BinKey&, const BinKey&) = default;
};

/// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM:SSZ` or with a `+HH:MM` offset.
std::int64_t parse_iso8601(std::string_view text);
std::string format_iso8601(std::int64_t unix_seconds);

std::int64_t week_index(std::int64_t timestamp, std::int64_t epoch);
std::int64_t month_index(std::int64_t timestamp, std::int64_t epoch);

/// Throws ValidationError when the record predates the epoch.
BinKey assign_bins(const PersonRecord& record, const CityTable& cities, std::int64_t epoch = default_epoch);

}  // namespace stylescope
