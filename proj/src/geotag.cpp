#include "korpus/geotag.hpp"

#include <cmath>
#include <set>

#include "korpus/csv.hpp"
#include "korpus/error.hpp"

namespace korpus {

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

std::optional<std::string> assign_city(const GeoPoint& p, const CityRegistry& registry) {
  if (registry.cities.empty()) raise(Errc::EmptyRegistry, "city registry is empty");
  const CityRegion* best = nullptr;
  double best_dist = 0.0;
  for (const CityRegion& city : registry.cities) {
    const double d = haversine_km(p, city.anchor);
    if (d > city.radius_km) continue;
    if (best == nullptr || d < best_dist || (d == best_dist && city.name < best->name)) {
      best = &city;
      best_dist = d;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->name;
}

CityRegistry load_city_registry_csv(const std::string& path, double default_radius_km) {
  if (!(default_radius_km > 0.0)) raise(Errc::FormatError, "default radius must be positive");
  const auto rows = read_csv(path);
  if (rows.empty()) raise(Errc::FormatError, path + ": empty cities file");
  const auto& header = rows.front();
  if (header.size() < 3 || trim(header[0]) != "name" || trim(header[1]) != "lat" ||
      trim(header[2]) != "lon") {
    raise(Errc::FormatError, path + ": expected header name,lat,lon[,radius_km]");
  }
  CityRegistry registry;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 3) raise(Errc::FormatError, path + ": short row " + std::to_string(r + 1));
    CityRegion city;
    city.radius_km = default_radius_km;
    city.name = trim(row[0]);
    if (city.name.empty()) raise(Errc::FormatError, path + ": blank city name");
    if (!seen.insert(city.name).second) {
      raise(Errc::FormatError, path + ": duplicate city " + city.name);
    }
    try {
      city.anchor.lat = std::stod(trim(row[1]));
      city.anchor.lon = std::stod(trim(row[2]));
    } catch (const std::exception&) {
      raise(Errc::FormatError, path + ": bad coordinates for " + city.name);
    }
    if (!geo_point_valid(city.anchor)) {
      raise(Errc::FormatError, path + ": coordinates out of range for " + city.name);
    }
    if (row.size() >= 4 && !trim(row[3]).empty()) {
      try {
        city.radius_km = std::stod(trim(row[3]));
      } catch (const std::exception&) {
        raise(Errc::FormatError, path + ": bad radius for " + city.name);
      }
      if (!(city.radius_km > 0.0)) {
        raise(Errc::FormatError, path + ": radius must be positive for " + city.name);
      }
    }
    registry.cities.push_back(std::move(city));
  }
  return registry;
}

const CityRegion* find_city(const CityRegistry& registry, const std::string& name) {
  for (const CityRegion& city : registry.cities) {
    if (city.name == name) return &city;
  }
  return nullptr;
}

}  // namespace korpus
