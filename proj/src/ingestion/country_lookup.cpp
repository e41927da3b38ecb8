#include "stylescope/ingestion/country_lookup.hpp"

#include "stylescope/core/cities.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

CountryLookup::CountryLookup(std::vector<Region> regions) : regions_(std::move(regions)) {
  for (const auto& r : regions_) {
    if (r.country.size() != 2) throw ValidationError("country lookup: '" + r.country + "' is not an alpha-2 code");
    if (!(r.radius_km > 0.0)) throw ValidationError("country lookup: radius must be > 0 for " + r.country);
  }
}

CountryLookup CountryLookup::load(const KvDocument& config) {
  std::vector<Region> regions;
  for (const auto& e : config.entries()) {
    if (e.section != "countries") {
      throw ValidationError(config.source() + ":" + std::to_string(e.line) + ": expected entries under [countries]");
    }
    const auto parts = split_trimmed(e.value, ',');
    if (parts.size() != 3) {
      throw ValidationError(config.source() + ":" + std::to_string(e.line) +
                            ": expected 'CC = latitude, longitude, radius_km'");
    }
    regions.push_back({e.key, parse_double(parts[0], "latitude"), parse_double(parts[1], "longitude"),
                       parse_double(parts[2], "radius_km")});
  }
  return CountryLookup(std::move(regions));
}

CountryLookup CountryLookup::load_file(const std::filesystem::path& path) { return load(KvDocument::load(path)); }

std::optional<std::string> CountryLookup::lookup(double latitude, double longitude) const {
  const Region* best = nullptr;
  double best_distance = 0.0;
  for (const auto& r : regions_) {
    const double d = haversine_km(latitude, longitude, r.latitude, r.longitude);
    if (d <= r.radius_km && (!best || d < best_distance)) {
      best = &r;
      best_distance = d;
    }
  }
  if (!best) return std::nullopt;
  return best->country;
}

void CountryLookup::fill(PersonRecord& record) const {
  if (!record.country) record.country = lookup(record.latitude, record.longitude);
}

}  // namespace stylescope
