#pragma once

namespace v2xcal {

struct GeodeticPosition {
  double latitude = 0.0;     // degrees
  double longitude = 0.0;    // degrees
  double altitude_ft = 0.0;  // feet

  friend bool operator==(const GeodeticPosition&, const GeodeticPosition&) = default;
};

// Local east-north-up coordinates in meters.
struct Enu {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Enu&, const Enu&) = default;
};

double distance(const Enu& a, const Enu& b);
Enu lerp(const Enu& a, const Enu& b, double t);

// Equirectangular projection about `origin`:
//   x = R dlon cos(lat0),  y = R dlat,  z = (alt - alt0) in meters.
// Accurate to well under 0.1% of distance within a few km of the origin.
Enu project(const GeodeticPosition& point, const GeodeticPosition& origin);

// Inverse of project().
GeodeticPosition unproject(const Enu& local, const GeodeticPosition& origin);

}  // namespace v2xcal
