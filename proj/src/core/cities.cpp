#include "stylescope/core/cities.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

CityTable::CityTable(std::vector<City> entries, double radius_km)
    : entries_(std::move(entries)), radius_km_(radius_km) {
  if (!(radius_km_ > 0.0) || !std::isfinite(radius_km_)) throw ValidationError("city table: radius_km must be > 0");
  std::set<std::string, std::less<>> names;
  for (const auto& c : entries_) {
    if (c.name.empty()) throw ValidationError("city table: empty city name");
    if (!names.insert(c.name).second) throw ValidationError("city table: duplicate city '" + c.name + "'");
    if (c.latitude < -90.0 || c.latitude > 90.0 || c.longitude < -180.0 || c.longitude > 180.0) {
      throw ValidationError("city table: coordinates out of range for '" + c.name + "'");
    }
  }
}

CityTable CityTable::default_table() {
  return CityTable({
      {"Austin", 30.2672, -97.7431, "US"},
      {"Bangkok", 13.7563, 100.5018, "TH"},
      {"Beijing", 39.9042, 116.4074, "CN"},
      {"Berlin", 52.5200, 13.4050, "DE"},
      {"Bogotá", 4.7110, -74.0721, "CO"},
      {"Budapest", 47.4979, 19.0402, "HU"},
      {"Buenos Aires", -34.6037, -58.3816, "AR"},
      {"Cairo", 30.0444, 31.2357, "EG"},
      {"Chicago", 41.8781, -87.6298, "US"},
      {"Delhi", 28.7041, 77.1025, "IN"},
      {"Dhaka", 23.8103, 90.4125, "BD"},
      {"Guangzhou", 23.1291, 113.2644, "CN"},
      {"Istanbul", 41.0082, 28.9784, "TR"},
      {"Jakarta", -6.2088, 106.8456, "ID"},
      {"Johannesburg", -26.2041, 28.0473, "ZA"},
      {"Karachi", 24.8607, 67.0011, "PK"},
      {"Kiev", 50.4501, 30.5234, "UA"},
      {"Kolkata", 22.5726, 88.3639, "IN"},
      {"Lagos", 6.5244, 3.3792, "NG"},
      {"London", 51.5074, -0.1278, "GB"},
      {"Los Angeles", 34.0522, -118.2437, "US"},
      {"Madrid", 40.4168, -3.7038, "ES"},
      {"Manila", 14.5995, 120.9842, "PH"},
      {"Mexico City", 19.4326, -99.1332, "MX"},
      {"Milan", 45.4642, 9.1900, "IT"},
      {"Moscow", 55.7558, 37.6173, "RU"},
      {"Mumbai", 19.0760, 72.8777, "IN"},
      {"Nairobi", -1.2921, 36.8219, "KE"},
      {"New York City", 40.7128, -74.0060, "US"},
      {"Osaka", 34.6937, 135.5023, "JP"},
      {"Paris", 48.8566, 2.3522, "FR"},
      {"Rio de Janeiro", -22.9068, -43.1729, "BR"},
      {"Rome", 41.9028, 12.4964, "IT"},
      {"São Paulo", -23.5505, -46.6333, "BR"},
      {"Seattle", 47.6062, -122.3321, "US"},
      {"Seoul", 37.5665, 126.9780, "KR"},
      {"Shanghai", 31.2304, 121.4737, "CN"},
      {"Singapore", 1.3521, 103.8198, "SG"},
      {"Sofia", 42.6977, 23.3219, "BG"},
      {"Sydney", -33.8688, 151.2093, "AU"},
      {"Tianjin", 39.3434, 117.3616, "CN"},
      {"Tokyo", 35.6762, 139.6503, "JP"},
      {"Toronto", 43.6532, -79.3832, "CA"},
      {"Vancouver", 49.2827, -123.1207, "CA"},
  });
}

std::optional<std::size_t> CityTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

const City& CityTable::at(std::string_view name) const {
  if (const auto i = index_of(name)) return entries_[*i];
  throw ValidationError("unknown city '" + std::string(name) + "'");
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * rad;
  const double dlon = (lon2 - lon1) * rad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * earth_radius_km * std::asin(std::min(1.0, std::sqrt(a)));
}

std::optional<std::size_t> nearest_city(const CityTable& table, double latitude, double longitude) {
  std::optional<std::size_t> best;
  double best_distance = 0.0;
  const auto& cities = table.entries();
  for (std::size_t i = 0; i < cities.size(); ++i) {
    const double d = haversine_km(latitude, longitude, cities[i].latitude, cities[i].longitude);
    if (d <= table.radius_km() && (!best || d < best_distance)) {
      best = i;
      best_distance = d;
    }
  }
  return best;
}

CityTable load_city_table(const KvDocument& config) {
  double radius = default_city_radius_km;
  std::vector<City> cities;
  for (const auto& e : config.entries()) {
    const std::string where = config.source() + ":" + std::to_string(e.line);
    if (e.section.empty()) {
      if (e.key != "radius_km") throw ValidationError(where + ": unknown key '" + e.key + "'");
      radius = parse_double(e.value, "radius_km");
    } else if (e.section == "cities") {
      const auto parts = split_trimmed(e.value, ',');
      if (parts.size() != 2 && parts.size() != 3) {
        throw ValidationError(where + ": expected 'name = latitude, longitude[, country]'");
      }
      City c{e.key, parse_double(parts[0], "latitude"), parse_double(parts[1], "longitude"), std::nullopt};
      if (parts.size() == 3) c.country = parts[2];
      cities.push_back(std::move(c));
    } else {
      throw ValidationError(where + ": unknown section [" + e.section + "]");
    }
  }
  return CityTable(std::move(cities), radius);
}

CityTable load_city_table_file(const std::filesystem::path& path) {
  return load_city_table(KvDocument::load(path));
}

KvDocument city_table_to_config(const CityTable& table) {
  KvDocument doc;
  doc.add("", "radius_km", format_double(table.radius_km()));
  for (const auto& c : table.entries()) {
    std::string value = format_double(c.latitude) + ", " + format_double(c.longitude);
    if (c.country) value += ", " + *c.country;
    doc.add("cities", c.name, value);
  }
  return doc;
}

}  // namespace stylescope
