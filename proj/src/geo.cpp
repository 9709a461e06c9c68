#include "v2xcal/geo.hpp"

#include <cmath>
#include <numbers>

#include "v2xcal/units.hpp"

namespace v2xcal {

double distance(const Enu& a, const Enu& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Enu lerp(const Enu& a, const Enu& b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.z + (b.z - a.z) * t};
}

Enu project(const GeodeticPosition& point, const GeodeticPosition& origin) {
  const double cos_lat0 = std::cos(deg_to_rad(origin.latitude));
  return {kEarthRadius * deg_to_rad(point.longitude - origin.longitude) * cos_lat0,
          kEarthRadius * deg_to_rad(point.latitude - origin.latitude),
          (point.altitude_ft - origin.altitude_ft) * kMetersPerFoot};
}

GeodeticPosition unproject(const Enu& local, const GeodeticPosition& origin) {
  constexpr double kRadToDeg = 180.0 / std::numbers::pi;
  const double cos_lat0 = std::cos(deg_to_rad(origin.latitude));
  return {origin.latitude + local.y / kEarthRadius * kRadToDeg,
          origin.longitude + local.x / (kEarthRadius * cos_lat0) * kRadToDeg,
          origin.altitude_ft + local.z / kMetersPerFoot};
}

}  // namespace v2xcal
