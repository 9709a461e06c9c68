#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "v2xcal/simulator.hpp"

namespace v2xcal {

// Delivery counts over one distance interval [bin_start, bin_end).
struct PdrBin {
  double bin_start = 0.0;
  double bin_end = 0.0;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::optional<double> pdr;  // percent; empty when sent == 0

  friend bool operator==(const PdrBin&, const PdrBin&) = default;
};

// Contiguous bins starting at distance 0, up to the last bin that holds
// a record. Interior bins without records carry an empty pdr.
struct PdrCurve {
  double bin_width = 0.0;
  std::vector<PdrBin> bins;

  std::uint64_t total_sent() const;
  std::uint64_t total_delivered() const;

  friend bool operator==(const PdrCurve&, const PdrCurve&) = default;
};

// 100 * delivered / sent, or empty when nothing was sent.
std::optional<double> pdr_percent(std::uint64_t sent, std::uint64_t delivered);

PdrCurve pdr_curve(const DeliveryLog& log, double bin_width,
                   DirectionFilter filter = DirectionFilter::Both);

struct HeatmapCell {
  std::int64_t ix = 0;  // cell index along x; covers [ix * cell, (ix + 1) * cell)
  std::int64_t iy = 0;
  double center_x = 0.0;
  double center_y = 0.0;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::optional<double> pdr;

  friend bool operator==(const HeatmapCell&, const HeatmapCell&) = default;
};

// Sparse grid: only cells that received at least one record, ordered by
// (iy, ix).
struct HeatmapGrid {
  double cell = 0.0;
  std::vector<HeatmapCell> cells;

  friend bool operator==(const HeatmapGrid&, const HeatmapGrid&) = default;
};

// Buckets records by the vehicle's position for both link directions.
HeatmapGrid heatmap(const DeliveryLog& log, double cell,
                    DirectionFilter filter = DirectionFilter::Both);

// Root mean square PDR difference (percentage points) over the bins that
// are non-empty in both curves. Throws DomainError if the bin geometry
// differs or no bin overlaps.
double rmse(const PdrCurve& observed, const PdrCurve& simulated);

}  // namespace v2xcal
