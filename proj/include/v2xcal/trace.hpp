#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "v2xcal/geo.hpp"

namespace v2xcal {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

enum class TransmissionType { Dsrc, Cv2x };
enum class MessageType { Bsm, Spat };
enum class MessageDirection { Sent, Received };

// One row of an OBU message log.
struct TraceRecord {
  Timestamp time{};
  double latitude = 0.0;     // degrees
  double longitude = 0.0;    // degrees
  double altitude_ft = 0.0;  // feet
  double heading_deg = 0.0;  // [0, 360)
  double speed_mph = 0.0;
  TransmissionType transmission_type = TransmissionType::Dsrc;
  MessageType message_type = MessageType::Bsm;
  MessageDirection direction = MessageDirection::Sent;
  // Present only when the log carries a message identifier column.
  std::optional<std::string> message_id;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Trace {
  std::vector<TraceRecord> records;
  std::optional<GeodeticPosition> rsu;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct TraceParseOptions {
  // Interpret the time column as integer milliseconds since the Unix epoch.
  bool epoch_ms = false;
};

// Parses the OBU log schema. Headers are matched case-insensitively and
// by name, so column order is free. Throws ParseError.
Trace parse_trace_csv(std::string_view document, const TraceParseOptions& options = {});

// Canonical header order:
//   time,latitude,longitude,altitude_ft,heading_deg,speed_mph,
//   transmission_type,message_type,direction[,message_id]
// message_id is emitted only if some record carries one.
std::string export_trace_csv(const Trace& trace);

// ISO 8601 UTC with microseconds, e.g. 2022-05-01T13:04:05.250000Z.
std::string format_timestamp(Timestamp time);
// Accepts "YYYY-MM-DD[T ]hh:mm:ss[.fraction][Z|+hh:mm|-hh:mm]".
std::optional<Timestamp> parse_timestamp(std::string_view text);

std::string_view to_string(TransmissionType type);
std::string_view to_string(MessageType type);
std::string_view to_string(MessageDirection direction);

// A trace sample in local coordinates, relative to the RSU.
struct TrackPoint {
  double time = 0.0;  // seconds since the first record
  Enu position;
  double speed = 0.0;  // m/s
  double heading_deg = 0.0;

  friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

struct ProjectedTrace {
  Timestamp start{};
  std::vector<TrackPoint> points;

  double duration() const { return points.empty() ? 0.0 : points.back().time - points.front().time; }
};

inline constexpr double kMaxProjectionRadius = 50'000.0;  // m

// Equirectangular projection of every record about the RSU. Refuses traces
// with any record farther than 50 km from the RSU.
ProjectedTrace project_enu(const Trace& trace);

}  // namespace v2xcal
