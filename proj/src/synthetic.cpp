#include "v2xcal/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "v2xcal/error.hpp"
#include "v2xcal/units.hpp"

namespace v2xcal {

namespace {

struct Leg {
  Enu from;
  Enu to;
  double speed;
  double length;
  double duration;
};

// Forward legs followed by the same legs reversed: one out-and-back lap.
std::vector<Leg> lap_legs(const SyntheticSpec& spec) {
  std::vector<Leg> forward;
  for (std::size_t i = 0; i + 1 < spec.waypoints.size(); ++i) {
    const double speed = spec.speeds.size() == 1 ? spec.speeds[0] : spec.speeds[i];
    const double length = distance(spec.waypoints[i], spec.waypoints[i + 1]);
    forward.push_back({spec.waypoints[i], spec.waypoints[i + 1], speed, length, length / speed});
  }
  std::vector<Leg> lap = forward;
  for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
    lap.push_back({it->to, it->from, it->speed, it->length, it->duration});
  }
  return lap;
}

double heading_of(const Enu& from, const Enu& to) {
  double deg = std::atan2(to.x - from.x, to.y - from.y) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 360.0;
  return deg >= 360.0 ? 0.0 : deg;
}

}  // namespace

void validate(const SyntheticSpec& spec) {
  if (!(spec.duration > 0.0) || !std::isfinite(spec.duration)) {
    throw DomainError("synthetic duration must be positive");
  }
  if (spec.waypoints.size() < 2) throw DomainError("synthetic route needs at least 2 waypoints");
  const std::size_t segments = spec.waypoints.size() - 1;
  if (spec.speeds.size() != 1 && spec.speeds.size() != segments) {
    throw DomainError("give one speed or one speed per route segment");
  }
  for (double s : spec.speeds) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("route speeds must be positive");
  }
  for (std::size_t i = 0; i < segments; ++i) {
    if (!(distance(spec.waypoints[i], spec.waypoints[i + 1]) > 0.0)) {
      throw DomainError("consecutive waypoints must differ");
    }
  }
  if (!(spec.sample_rate > 0.0) || !std::isfinite(spec.sample_rate)) {
    throw DomainError("sample_rate must be positive");
  }
  validate(spec.planted.radio);
  validate(spec.planted.fading);
}

SyntheticSpec default_synthetic_spec() {
  SyntheticSpec spec;
  spec.waypoints = {{-1000.0, 15.0, 0.0}, {1000.0, 15.0, 0.0}};
  spec.speeds = {13.4};
  // Four one-way passes.
  spec.duration = 4.0 * 2000.0 / 13.4;
  spec.seed = 1;
  // Georgia Ave & MLK Blvd, Chattanooga TN.
  spec.rsu = {35.04563, -85.30483, 676.0};
  spec.start_time = Timestamp{std::chrono::sys_days{std::chrono::year{2022} / 6 / 1}};
  return spec;
}

Trace synthesize_trace(const SyntheticSpec& spec) {
  validate(spec);
  const std::vector<Leg> lap = lap_legs(spec);
  double lap_time = 0.0;
  for (const auto& leg : lap) lap_time += leg.duration;

  Trace trace;
  trace.rsu = spec.rsu;
  const auto samples = transmission_count(spec.duration, spec.sample_rate);
  trace.records.reserve(samples + 1);
  for (std::size_t k = 0; k <= samples; ++k) {
    const double t = k == samples ? spec.duration : static_cast<double>(k) / spec.sample_rate;
    if (k == samples && k > 0 && static_cast<double>(k - 1) / spec.sample_rate >= t) break;
    double into_lap = std::fmod(t, lap_time);
    std::size_t leg_index = 0;
    while (leg_index + 1 < lap.size() && into_lap >= lap[leg_index].duration) {
      into_lap -= lap[leg_index].duration;
      ++leg_index;
    }
    const Leg& leg = lap[leg_index];
    const double frac = std::min(1.0, into_lap / leg.duration);
    const GeodeticPosition geo = unproject(lerp(leg.from, leg.to, frac), spec.rsu);

    TraceRecord rec;
    rec.time = spec.start_time +
               std::chrono::microseconds{static_cast<std::int64_t>(std::llround(t * 1e6))};
    rec.latitude = geo.latitude;
    rec.longitude = geo.longitude;
    rec.altitude_ft = geo.altitude_ft;
    rec.heading_deg = heading_of(leg.from, leg.to);
    rec.speed_mph = leg.speed / kMetersPerSecondPerMph;
    rec.transmission_type = TransmissionType::Dsrc;
    rec.message_type = MessageType::Bsm;
    rec.direction = MessageDirection::Sent;
    trace.records.push_back(rec);
  }
  return trace;
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec, const ScenarioConfig& scenario) {
  SyntheticDataset data;
  data.trace = synthesize_trace(spec);
  data.scenario = scenario;
  data.scenario.master_seed = spec.seed;
  data.log = run_scenario(data.trace, data.scenario, spec.planted.radio, spec.planted.fading);
  data.observed = pdr_curve(data.log, data.scenario.bin_width, data.scenario.pdr_direction);
  return data;
}

}  // namespace v2xcal
