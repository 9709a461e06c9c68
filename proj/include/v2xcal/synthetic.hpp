#pragma once

#include <cstdint>
#include <vector>

#include "v2xcal/aggregate.hpp"
#include "v2xcal/geo.hpp"
#include "v2xcal/radio.hpp"
#include "v2xcal/simulator.hpp"
#include "v2xcal/trace.hpp"

namespace v2xcal {

// Ground-truth dataset recipe: a vehicle drives the waypoint polyline out
// and back, repeatedly, for `duration` seconds while the planted channel
// decides every packet.
struct SyntheticSpec {
  ChannelParams planted = calibrated_preset();
  std::vector<Enu> waypoints;  // ENU meters about the RSU
  // Per-segment speeds (m/s); a single value applies to every segment.
  std::vector<double> speeds;
  double duration = 0.0;  // s
  // Seeds the simulation; overrides the scenario master seed.
  std::uint64_t seed = 1;
  GeodeticPosition rsu;
  double sample_rate = 10.0;  // trace rows per second
  Timestamp start_time{};

  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

void validate(const SyntheticSpec& spec);

// A 2 km straight drive-by at 13.4 m/s with 15 m lateral offset from the
// RSU, four passes, planted with the calibrated channel.
SyntheticSpec default_synthetic_spec();

struct SyntheticDataset {
  Trace trace;
  DeliveryLog log;
  PdrCurve observed;
  // Scenario actually simulated; its master seed is the dataset seed.
  ScenarioConfig scenario;
};

// Builds the trace, replays it through the simulator with the planted
// parameters and aggregates the observed PDR curve. Deterministic in
// (spec, scenario).
SyntheticDataset generate_synthetic(const SyntheticSpec& spec, const ScenarioConfig& scenario);

// Only the trace part of generate_synthetic().
Trace synthesize_trace(const SyntheticSpec& spec);

}  // namespace v2xcal
