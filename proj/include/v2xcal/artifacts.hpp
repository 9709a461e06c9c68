#pragma once

#include <string>
#include <string_view>

#include "v2xcal/aggregate.hpp"
#include "v2xcal/simulator.hpp"

namespace v2xcal {

// Delivery log schema:
//   timestamp,direction,tx_x,tx_y,tx_z,rx_x,rx_y,rx_z,distance,rx_power_dbm,delivered,reason
// direction is VehicleToRsu or RsuToVehicle, delivered is 1 or 0 and
// reason is Delivered, BelowSensitivity or BelowSnr.
std::string export_log_csv(const DeliveryLog& log);
DeliveryLog parse_log_csv(std::string_view document);

// PDR curve schema: bin_start,bin_end,sent,delivered,pdr
// pdr is blank for bins without records.
std::string export_pdr_csv(const PdrCurve& curve);
// The bin width is taken from the first row; bins must be contiguous and
// start at 0. A header-only document gives an empty curve with
// `empty_bin_width` as its width.
PdrCurve parse_pdr_csv(std::string_view document, double empty_bin_width = 0.0);

// Heatmap schema: cell_x,cell_y,center_x,center_y,sent,delivered,pdr
// One row per non-empty cell. The cell size is implied by the centers
// and must be supplied when parsing.
std::string export_heatmap_csv(const HeatmapGrid& grid);
HeatmapGrid parse_heatmap_csv(std::string_view document, double cell);

std::string_view to_string(LinkDirection direction);
std::string_view to_string(ReceptionReason reason);

}  // namespace v2xcal
