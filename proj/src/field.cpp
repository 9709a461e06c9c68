#include "v2xcal/field.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "v2xcal/error.hpp"
#include "v2xcal/simulator.hpp"

namespace v2xcal {

namespace {

void add(PdrCurve& curve, double dist, std::uint64_t sent, std::uint64_t delivered) {
  const auto index = static_cast<std::size_t>(std::floor(dist / curve.bin_width));
  while (curve.bins.size() <= index) {
    const double k = static_cast<double>(curve.bins.size());
    curve.bins.push_back({k * curve.bin_width, (k + 1.0) * curve.bin_width, 0, 0, std::nullopt});
  }
  curve.bins[index].sent += sent;
  curve.bins[index].delivered += delivered;
}

void finish(PdrCurve& curve) {
  for (auto& b : curve.bins) {
    b.delivered = std::min(b.delivered, b.sent);
    b.pdr = pdr_percent(b.sent, b.delivered);
  }
}

}  // namespace

PdrCurve field_pdr_curve(const Trace& trace, const FieldPdrOptions& options) {
  if (!(options.bin_width > 0.0)) throw DomainError("bin_width must be positive");
  const ProjectedTrace track = project_enu(trace);
  PdrCurve curve;
  curve.bin_width = options.bin_width;
  if (track.points.empty()) return curve;

  FieldPdrMode mode = options.mode;
  if (mode == FieldPdrMode::Auto) {
    bool all_ids = true;
    bool any = false;
    for (const auto& r : trace.records) {
      if (r.message_type != options.message_type) continue;
      any = true;
      all_ids = all_ids && r.message_id.has_value();
    }
    mode = any && all_ids ? FieldPdrMode::PairById : FieldPdrMode::ExpectedCadence;
  }

  if (mode == FieldPdrMode::PairById) {
    std::set<std::string> received;
    for (const auto& r : trace.records) {
      if (r.message_type != options.message_type || r.direction != MessageDirection::Received) continue;
      if (!r.message_id) throw DomainError("pairing by id needs a message_id on every record");
      received.insert(*r.message_id);
    }
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      const auto& r = trace.records[i];
      if (r.message_type != options.message_type || r.direction != MessageDirection::Sent) continue;
      if (!r.message_id) throw DomainError("pairing by id needs a message_id on every record");
      const double d = distance(track.points[i].position, options.rsu_position);
      add(curve, d, 1, received.count(*r.message_id) ? 1 : 0);
    }
  } else {
    if (!(options.expected_rate > 0.0)) throw DomainError("expected_rate must be positive");
    const std::size_t expected = transmission_count(track.duration(), options.expected_rate);
    for (std::size_t k = 0; k < expected; ++k) {
      const double t = track.points.front().time + static_cast<double>(k) / options.expected_rate;
      add(curve, distance(position_at(track, t), options.rsu_position), 1, 0);
    }
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      const auto& r = trace.records[i];
      if (r.message_type != options.message_type || r.direction != MessageDirection::Received) continue;
      add(curve, distance(track.points[i].position, options.rsu_position), 0, 1);
    }
  }
  finish(curve);
  return curve;
}

}  // namespace v2xcal
