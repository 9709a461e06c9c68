#include "v2xcal/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "v2xcal/error.hpp"

namespace v2xcal {

namespace {

enum class StreamPurpose : std::uint64_t { Shadowing = 1, FastFading = 2 };

// Walks forward through the samples; query times must not decrease.
class TrackCursor {
 public:
  explicit TrackCursor(const std::vector<TrackPoint>& points) : points_(points) {}

  Enu at(double t) {
    if (t <= points_.front().time) return points_.front().position;
    if (t >= points_.back().time) return points_.back().position;
    while (index_ + 1 < points_.size() && points_[index_ + 1].time <= t) ++index_;
    const TrackPoint& a = points_[index_];
    const TrackPoint& b = points_[index_ + 1];
    const double span = b.time - a.time;
    return span > 0.0 ? lerp(a.position, b.position, (t - a.time) / span) : b.position;
  }

 private:
  const std::vector<TrackPoint>& points_;
  std::size_t index_ = 0;
};

}  // namespace

void validate(const ScenarioConfig& scenario) {
  if (!(scenario.bsm_rate > 0.0) || !std::isfinite(scenario.bsm_rate)) {
    throw DomainError("bsm_rate must be positive");
  }
  if (!(scenario.spat_rate > 0.0) || !std::isfinite(scenario.spat_rate)) {
    throw DomainError("spat_rate must be positive");
  }
  if (!(scenario.bin_width > 0.0) || !std::isfinite(scenario.bin_width)) {
    throw DomainError("bin_width must be positive");
  }
  if (!(scenario.heatmap_cell > 0.0) || !std::isfinite(scenario.heatmap_cell)) {
    throw DomainError("heatmap_cell must be positive");
  }
}

bool matches(DirectionFilter filter, LinkDirection direction) {
  switch (filter) {
    case DirectionFilter::Both: return true;
    case DirectionFilter::VehicleToRsu: return direction == LinkDirection::VehicleToRsu;
    case DirectionFilter::RsuToVehicle: return direction == LinkDirection::RsuToVehicle;
  }
  return false;
}

std::size_t transmission_count(double duration, double rate) {
  const double product = duration * rate;
  if (!(product > 0.0)) return 0;
  const double nearest = std::round(product);
  if (std::abs(product - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::floor(product));
}

FadingStreams packet_streams(std::uint64_t master_seed, LinkDirection direction, std::uint64_t k) {
  const auto dir = static_cast<std::uint64_t>(direction);
  return {SplitMix64(derive_seed(
              {master_seed, dir, k, static_cast<std::uint64_t>(StreamPurpose::Shadowing)})),
          SplitMix64(derive_seed(
              {master_seed, dir, k, static_cast<std::uint64_t>(StreamPurpose::FastFading)}))};
}

Enu position_at(const ProjectedTrace& trace, double t) {
  const auto& pts = trace.points;
  if (pts.empty()) throw DomainError("empty trace");
  if (t <= pts.front().time) return pts.front().position;
  if (t >= pts.back().time) return pts.back().position;
  const auto upper = std::upper_bound(pts.begin(), pts.end(), t,
                                      [](double v, const TrackPoint& p) { return v < p.time; });
  const TrackPoint& b = *upper;
  const TrackPoint& a = *(upper - 1);
  const double span = b.time - a.time;
  return span > 0.0 ? lerp(a.position, b.position, (t - a.time) / span) : b.position;
}

DeliveryLog run_scenario(const ProjectedTrace& trace, const ScenarioConfig& scenario,
                         const RadioParams& radio, const FadingParams& fading) {
  if (trace.points.empty()) throw DomainError("empty trace");
  for (std::size_t i = 1; i < trace.points.size(); ++i) {
    if (trace.points[i].time < trace.points[i - 1].time) {
      throw DomainError("trace timestamps are not monotone at sample " + std::to_string(i + 1));
    }
  }
  validate(scenario);
  validate(radio);
  validate(fading);

  const double t0 = trace.points.front().time;
  const double duration = trace.duration();
  const std::size_t n_bsm = transmission_count(duration, scenario.bsm_rate);
  const std::size_t n_spat = transmission_count(duration, scenario.spat_rate);

  DeliveryLog log;
  log.reserve(n_bsm + n_spat);
  TrackCursor cursor(trace.points);

  auto emit = [&](LinkDirection direction, std::size_t k, double offset) {
    const Enu vehicle = cursor.at(t0 + offset);
    DeliveryRecord rec;
    rec.timestamp = offset;
    rec.direction = direction;
    if (direction == LinkDirection::VehicleToRsu) {
      rec.tx_position = vehicle;
      rec.rx_position = scenario.rsu_position;
    } else {
      rec.tx_position = scenario.rsu_position;
      rec.rx_position = vehicle;
    }
    rec.distance = distance(rec.tx_position, rec.rx_position);
    FadingStreams streams = packet_streams(scenario.master_seed, direction, k);
    // Below the reference distance the model is clamped anyway.
    const double effective = std::max(rec.distance, fading.reference_distance);
    rec.rx_power = cascade_rx_power(radio, fading, effective, streams);
    const Reception rx = is_received(rec.rx_power, radio);
    rec.delivered = rx.delivered;
    rec.reason = rx.reason;
    log.push_back(rec);
  };

  // Merge the two cadences in time order. Offsets are k / rate rather than
  // accumulated sums so they do not drift.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n_bsm || j < n_spat) {
    const double t_bsm = i < n_bsm ? static_cast<double>(i) / scenario.bsm_rate : INFINITY;
    const double t_spat = j < n_spat ? static_cast<double>(j) / scenario.spat_rate : INFINITY;
    if (t_bsm <= t_spat) {
      emit(LinkDirection::VehicleToRsu, i++, t_bsm);
    } else {
      emit(LinkDirection::RsuToVehicle, j++, t_spat);
    }
  }
  return log;
}

DeliveryLog run_scenario(const Trace& trace, const ScenarioConfig& scenario, const RadioParams& radio,
                         const FadingParams& fading) {
  return run_scenario(project_enu(trace), scenario, radio, fading);
}

}  // namespace v2xcal
