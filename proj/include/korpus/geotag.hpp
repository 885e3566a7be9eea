#pragma once

#include <optional>
#include <string>
#include <vector>

#include "korpus/corpus_model.hpp"

namespace korpus {

inline constexpr double kEarthRadiusKm = 6371.0088;  // IUGG mean radius
inline constexpr double kDefaultCityRadiusKm = 50.0;

struct CityRegion {
  std::string name;
  GeoPoint anchor;
  double radius_km = kDefaultCityRadiusKm;
};

/// Ordered city list; names are unique. The bundled fixture carries the
/// 33 provincial capitals verbatim, including the Banda Aceh row whose
/// printed coordinates fall ~2 km from Medan's.
struct CityRegistry {
  std::vector<CityRegion> cities;
};

/// Great-circle distance in km on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

/// Nearest city whose fence contains the point; ties on distance go to the
/// lexicographically smallest name. nullopt when no fence contains it.
/// Throws Error(EmptyRegistry) on an empty registry.
std::optional<std::string> assign_city(const GeoPoint& p, const CityRegistry& registry);

/// CSV with header `name,lat,lon,radius_km`; the radius column is optional
/// and empty cells take `default_radius_km`. Throws Error(IoError/FormatError).
CityRegistry load_city_registry_csv(const std::string& path,
                                    double default_radius_km = kDefaultCityRadiusKm);

const CityRegion* find_city(const CityRegistry& registry, const std::string& name);

}  // namespace korpus
