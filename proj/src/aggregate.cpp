#include "v2xcal/aggregate.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "v2xcal/error.hpp"

namespace v2xcal {

std::uint64_t PdrCurve::total_sent() const {
  std::uint64_t n = 0;
  for (const auto& b : bins) n += b.sent;
  return n;
}

std::uint64_t PdrCurve::total_delivered() const {
  std::uint64_t n = 0;
  for (const auto& b : bins) n += b.delivered;
  return n;
}

std::optional<double> pdr_percent(std::uint64_t sent, std::uint64_t delivered) {
  if (sent == 0) return std::nullopt;
  return 100.0 * static_cast<double>(delivered) / static_cast<double>(sent);
}

PdrCurve pdr_curve(const DeliveryLog& log, double bin_width, DirectionFilter filter) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw DomainError("bin_width must be positive");
  PdrCurve curve;
  curve.bin_width = bin_width;
  for (const auto& rec : log) {
    if (!matches(filter, rec.direction)) continue;
    const auto index = static_cast<std::size_t>(std::floor(rec.distance / bin_width));
    while (curve.bins.size() <= index) {
      const double k = static_cast<double>(curve.bins.size());
      curve.bins.push_back({k * bin_width, (k + 1.0) * bin_width, 0, 0, std::nullopt});
    }
    ++curve.bins[index].sent;
    if (rec.delivered) ++curve.bins[index].delivered;
  }
  for (auto& bin : curve.bins) bin.pdr = pdr_percent(bin.sent, bin.delivered);
  return curve;
}

HeatmapGrid heatmap(const DeliveryLog& log, double cell, DirectionFilter filter) {
  if (!(cell > 0.0) || !std::isfinite(cell)) throw DomainError("heatmap cell must be positive");
  // Keyed (iy, ix) so iteration yields row-major order.
  std::map<std::pair<std::int64_t, std::int64_t>, std::pair<std::uint64_t, std::uint64_t>> counts;
  for (const auto& rec : log) {
    if (!matches(filter, rec.direction)) continue;
    const Enu& p = rec.vehicle_position();
    const auto ix = static_cast<std::int64_t>(std::floor(p.x / cell));
    const auto iy = static_cast<std::int64_t>(std::floor(p.y / cell));
    auto& c = counts[{iy, ix}];
    ++c.first;
    if (rec.delivered) ++c.second;
  }
  HeatmapGrid grid;
  grid.cell = cell;
  grid.cells.reserve(counts.size());
  for (const auto& [key, c] : counts) {
    const auto [iy, ix] = key;
    grid.cells.push_back({ix, iy, (static_cast<double>(ix) + 0.5) * cell,
                          (static_cast<double>(iy) + 0.5) * cell, c.first, c.second,
                          pdr_percent(c.first, c.second)});
  }
  return grid;
}

double rmse(const PdrCurve& observed, const PdrCurve& simulated) {
  const double tol = 1e-9 * std::max(std::abs(observed.bin_width), std::abs(simulated.bin_width));
  if (std::abs(observed.bin_width - simulated.bin_width) > tol) {
    throw DomainError("PDR curves use different bin widths");
  }
  double sum = 0.0;
  std::size_t n = 0;
  const std::size_t shared = std::min(observed.bins.size(), simulated.bins.size());
  for (std::size_t i = 0; i < shared; ++i) {
    const auto& a = observed.bins[i].pdr;
    const auto& b = simulated.bins[i].pdr;
    if (!a || !b) continue;
    sum += (*a - *b) * (*a - *b);
    ++n;
  }
  if (n == 0) throw DomainError("PDR curves share no non-empty bin");
  return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace v2xcal
