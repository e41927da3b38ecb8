#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylescope/core/kv_config.hpp"

namespace stylescope {

inline constexpr double earth_radius_km = 6371.0088;
inline constexpr double default_city_radius_km = 5.0;

struct City {
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
  std::optional<std::string> country;  // used by the synthetic generator only

  friend bool operator==(const City&, const City&) = default;
};

class CityTable {
 public:
  explicit CityTable(std::vector<City> entries, double radius_km = default_city_radius_km);

  /// The 44 sampled world cities with approximate city-center coordinates.
  static CityTable default_table();

  const std::vector<City>& entries() const noexcept { return entries_; }
  double radius_km() const noexcept { return radius_km_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const City& at(std::string_view name) const;

  friend bool operator==(const CityTable&, const CityTable&) = default;

 private:
  std::vector<City> entries_;
  double radius_km_;
};

/// Great-circle distance on a spherical Earth.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

/// Nearest city within the table radius; ties keep the earlier table entry.
std::optional<std::size_t> nearest_city(const CityTable& table, double latitude, double longitude);

/// Format:
///   radius_km = 5
///   [cities]
///   New York City = 40.7128, -74.0060, US
CityTable load_city_table(const KvDocument& config);
CityTable load_city_table_file(const std::filesystem::path& path);
KvDocument city_table_to_config(const CityTable& table);

}  // namespace stylescope
