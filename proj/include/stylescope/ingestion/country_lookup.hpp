#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stylescope/core/kv_config.hpp"
#include "stylescope/core/record.hpp"

namespace stylescope {

/// Point-and-radius table used to fill missing country codes at ingest:
///
///   [countries]
///   US = 40.71, -74.00, 300
///   US = 34.05, -118.24, 300
///
/// The nearest region whose radius covers the point wins.
class CountryLookup {
 public:
  struct Region {
    std::string country;
    double latitude;
    double longitude;
    double radius_km;
  };

  explicit CountryLookup(std::vector<Region> regions);
  static CountryLookup load(const KvDocument& config);
  static CountryLookup load_file(const std::filesystem::path& path);

  std::optional<std::string> lookup(double latitude, double longitude) const;
  /// Sets `record.country` when absent and a region matches.
  void fill(PersonRecord& record) const;

  const std::vector<Region>& regions() const noexcept { return regions_; }

 private:
  std::vector<Region> regions_;
};

}  // namespace stylescope
