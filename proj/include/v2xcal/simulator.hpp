#pragma once

#include <cstdint>
#include <vector>

#include "v2xcal/geo.hpp"
#include "v2xcal/propagation.hpp"
#include "v2xcal/radio.hpp"
#include "v2xcal/trace.hpp"

namespace v2xcal {

// Which link a packet travels on: BSMs go vehicle to RSU, SPaTs RSU to vehicle.
enum class LinkDirection { VehicleToRsu, RsuToVehicle };

enum class DirectionFilter { Both, VehicleToRsu, RsuToVehicle };

struct ScenarioConfig {
  Enu rsu_position{};       // ENU meters, the trace is projected about the RSU
  double bsm_rate = 10.0;   // Hz
  double spat_rate = 10.0;  // Hz
  std::uint64_t master_seed = 1;
  double bin_width = 20.0;     // m
  double heatmap_cell = 20.0;  // m
  DirectionFilter pdr_direction = DirectionFilter::Both;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

void validate(const ScenarioConfig& scenario);

struct DeliveryRecord {
  double timestamp = 0.0;  // s since scenario start
  LinkDirection direction = LinkDirection::VehicleToRsu;
  Enu tx_position;
  Enu rx_position;
  double distance = 0.0;  // m
  double rx_power = 0.0;  // dBm
  bool delivered = false;
  ReceptionReason reason = ReceptionReason::BelowSensitivity;

  // Where the vehicle was when this packet went out.
  const Enu& vehicle_position() const {
    return direction == LinkDirection::VehicleToRsu ? tx_position : rx_position;
  }

  friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
};

using DeliveryLog = std::vector<DeliveryRecord>;

bool matches(DirectionFilter filter, LinkDirection direction);

// Number of transmissions at `rate` in [0, duration): floor(duration * rate),
// tolerant of floating point representation error in the product.
std::size_t transmission_count(double duration, double rate);

// Random streams for the k-th packet of one direction. Depends only on
// (master_seed, direction, k), so packets of one direction never perturb
// the other's draws.
FadingStreams packet_streams(std::uint64_t master_seed, LinkDirection direction, std::uint64_t k);

// Replays the vehicle track against a fixed RSU. BSMs are sent at
// bsm_rate from the interpolated vehicle position and SPaTs at spat_rate
// from the RSU; each packet is drawn through the fading cascade and
// checked against the receiver. Records are ordered by time, BSM first on
// ties. Throws DomainError on an empty or unsorted trace.
DeliveryLog run_scenario(const ProjectedTrace& trace, const ScenarioConfig& scenario,
                         const RadioParams& radio, const FadingParams& fading);

// Convenience overload that projects the geodetic trace first.
DeliveryLog run_scenario(const Trace& trace, const ScenarioConfig& scenario, const RadioParams& radio,
                         const FadingParams& fading);

// Vehicle position at time `t` by linear interpolation between samples;
// clamps outside the sampled interval.
Enu position_at(const ProjectedTrace& trace, double t);

}  // namespace v2xcal
