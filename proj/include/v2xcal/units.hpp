#pragma once

#include <cmath>
#include <numbers>

namespace v2xcal {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kDsrcCenterFrequency = 5.9e9;   // Hz
inline constexpr double kDsrcBandLow = 5.85e9;          // Hz
inline constexpr double kDsrcBandHigh = 5.925e9;        // Hz

inline constexpr double kMetersPerFoot = 0.3048;
inline constexpr double kMetersPerSecondPerMph = 0.44704;
inline constexpr double kEarthRadius = 6'371'000.0;  // m, mean sphere

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Absolute power conversions; dBm is decibels relative to 1 mW.
inline double mw_to_dbm(double milliwatts) { return to_db(milliwatts); }
inline double dbm_to_mw(double dbm) { return to_linear(dbm); }

inline double deg_to_rad(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace v2xcal
