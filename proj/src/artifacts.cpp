#include "v2xcal/artifacts.hpp"

#include <cmath>
#include <optional>

#include "v2xcal/csv.hpp"
#include "v2xcal/error.hpp"
#include "v2xcal/text.hpp"

namespace v2xcal {

std::string_view to_string(LinkDirection direction) {
  return direction == LinkDirection::VehicleToRsu ? "VehicleToRsu" : "RsuToVehicle";
}

std::string_view to_string(ReceptionReason reason) {
  switch (reason) {
    case ReceptionReason::Delivered: return "Delivered";
    case ReceptionReason::BelowSensitivity: return "BelowSensitivity";
    case ReceptionReason::BelowSnr: return "BelowSnr";
  }
  return "";
}

namespace {

// Field accessor for one data row with consistent diagnostics.
class RowReader {
 public:
  RowReader(const csv::Row& row, std::size_t expected) : row_(row) {
    if (row.fields.size() != expected) {
      throw ParseError(row.line, "",
                       "expected " + std::to_string(expected) + " fields, found " +
                           std::to_string(row.fields.size()));
    }
  }

  double number(std::size_t col, const char* name) const {
    auto v = parse_double(row_.fields[col]);
    if (!v) throw ParseError(row_.line, name, "not a number: '" + row_.fields[col] + "'");
    return *v;
  }

  std::uint64_t count(std::size_t col, const char* name) const {
    auto v = parse_uint(row_.fields[col]);
    if (!v) throw ParseError(row_.line, name, "not a count: '" + row_.fields[col] + "'");
    return *v;
  }

  std::int64_t integer(std::size_t col, const char* name) const {
    auto v = parse_int(row_.fields[col]);
    if (!v) throw ParseError(row_.line, name, "not an integer: '" + row_.fields[col] + "'");
    return *v;
  }

  std::optional<double> optional_number(std::size_t col, const char* name) const {
    if (trim(row_.fields[col]).empty()) return std::nullopt;
    return number(col, name);
  }

  const std::string& text(std::size_t col) const { return row_.fields[col]; }
  std::size_t line() const { return row_.line; }

 private:
  const csv::Row& row_;
};

std::string optional_text(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

void check_pdr(const RowReader& r, std::uint64_t sent, std::uint64_t delivered,
               const std::optional<double>& pdr) {
  if (delivered > sent) throw ParseError(r.line(), "delivered", "delivered exceeds sent");
  if (sent == 0 && pdr) throw ParseError(r.line(), "pdr", "empty bin must leave pdr blank");
  if (sent > 0 && !pdr) throw ParseError(r.line(), "pdr", "missing pdr for non-empty bin");
  if (pdr && (*pdr < 0.0 || *pdr > 100.0)) throw ParseError(r.line(), "pdr", "pdr outside [0, 100]");
}

}  // namespace

std::string export_log_csv(const DeliveryLog& log) {
  std::string out =
      "timestamp,direction,tx_x,tx_y,tx_z,rx_x,rx_y,rx_z,distance,rx_power_dbm,delivered,reason\n";
  for (const auto& r : log) {
    csv::append_row(out, {format_double(r.timestamp), std::string(to_string(r.direction)),
                          format_double(r.tx_position.x), format_double(r.tx_position.y),
                          format_double(r.tx_position.z), format_double(r.rx_position.x),
                          format_double(r.rx_position.y), format_double(r.rx_position.z),
                          format_double(r.distance), format_double(r.rx_power),
                          r.delivered ? "1" : "0", std::string(to_string(r.reason))});
  }
  return out;
}

DeliveryLog parse_log_csv(std::string_view document) {
  const csv::Table table = csv::read(document);
  if (table.header.empty()) throw ParseError(0, "", "empty delivery log document");
  const csv::Columns cols(table.header);
  const std::size_t c_time = cols.require({"timestamp"});
  const std::size_t c_dir = cols.require({"direction"});
  const std::size_t c_tx[3] = {cols.require({"tx_x"}), cols.require({"tx_y"}), cols.require({"tx_z"})};
  const std::size_t c_rx[3] = {cols.require({"rx_x"}), cols.require({"rx_y"}), cols.require({"rx_z"})};
  const std::size_t c_dist = cols.require({"distance"});
  const std::size_t c_power = cols.require({"rx_power_dbm", "rx_power"});
  const std::size_t c_ok = cols.require({"delivered"});
  const std::size_t c_reason = cols.require({"reason"});

  DeliveryLog log;
  log.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const RowReader r(row, table.header.size());
    DeliveryRecord rec;
    rec.timestamp = r.number(c_time, "timestamp");
    const std::string dir = to_lower(r.text(c_dir));
    if (dir == "vehicletorsu" || dir == "bsm") {
      rec.direction = LinkDirection::VehicleToRsu;
    } else if (dir == "rsutovehicle" || dir == "spat") {
      rec.direction = LinkDirection::RsuToVehicle;
    } else {
      throw ParseError(row.line, "direction", "expected VehicleToRsu or RsuToVehicle");
    }
    rec.tx_position = {r.number(c_tx[0], "tx_x"), r.number(c_tx[1], "tx_y"), r.number(c_tx[2], "tx_z")};
    rec.rx_position = {r.number(c_rx[0], "rx_x"), r.number(c_rx[1], "rx_y"), r.number(c_rx[2], "rx_z")};
    rec.distance = r.number(c_dist, "distance");
    if (rec.distance < 0.0) throw ParseError(row.line, "distance", "negative distance");
    rec.rx_power = r.number(c_power, "rx_power_dbm");
    const std::string ok = to_lower(r.text(c_ok));
    if (ok == "1" || ok == "true") {
      rec.delivered = true;
    } else if (ok == "0" || ok == "false") {
      rec.delivered = false;
    } else {
      throw ParseError(row.line, "delivered", "expected 1 or 0");
    }
    const std::string reason = to_lower(r.text(c_reason));
    if (reason == "delivered") {
      rec.reason = ReceptionReason::Delivered;
    } else if (reason == "belowsensitivity") {
      rec.reason = ReceptionReason::BelowSensitivity;
    } else if (reason == "belowsnr") {
      rec.reason = ReceptionReason::BelowSnr;
    } else {
      throw ParseError(row.line, "reason", "unknown reason '" + r.text(c_reason) + "'");
    }
    if (rec.delivered != (rec.reason == ReceptionReason::Delivered)) {
      throw ParseError(row.line, "reason", "reason disagrees with delivered flag");
    }
    log.push_back(rec);
  }
  return log;
}

std::string export_pdr_csv(const PdrCurve& curve) {
  std::string out = "bin_start,bin_end,sent,delivered,pdr\n";
  for (const auto& b : curve.bins) {
    csv::append_row(out, {format_double(b.bin_start), format_double(b.bin_end), std::to_string(b.sent),
                          std::to_string(b.delivered), optional_text(b.pdr)});
  }
  return out;
}

PdrCurve parse_pdr_csv(std::string_view document, double empty_bin_width) {
  const csv::Table table = csv::read(document);
  if (table.header.empty()) throw ParseError(0, "", "empty PDR document");
  const csv::Columns cols(table.header);
  const std::size_t c_start = cols.require({"bin_start"});
  const std::size_t c_end = cols.require({"bin_end"});
  const std::size_t c_sent = cols.require({"sent"});
  const std::size_t c_ok = cols.require({"delivered"});
  const std::size_t c_pdr = cols.require({"pdr"});

  PdrCurve curve;
  curve.bin_width = empty_bin_width;
  for (const auto& row : table.rows) {
    const RowReader r(row, table.header.size());
    PdrBin bin;
    bin.bin_start = r.number(c_start, "bin_start");
    bin.bin_end = r.number(c_end, "bin_end");
    bin.sent = r.count(c_sent, "sent");
    bin.delivered = r.count(c_ok, "delivered");
    bin.pdr = r.optional_number(c_pdr, "pdr");
    check_pdr(r, bin.sent, bin.delivered, bin.pdr);

    if (curve.bins.empty()) {
      curve.bin_width = bin.bin_end - bin.bin_start;
      if (!(curve.bin_width > 0.0)) throw ParseError(row.line, "bin_end", "bin_end must exceed bin_start");
      if (bin.bin_start != 0.0) throw ParseError(row.line, "bin_start", "first bin must start at 0");
    }
    const double k = static_cast<double>(curve.bins.size());
    const double tol = 1e-9 * curve.bin_width * (k + 1.0);
    if (std::abs(bin.bin_start - k * curve.bin_width) > tol ||
        std::abs(bin.bin_end - (k + 1.0) * curve.bin_width) > tol) {
      throw ParseError(row.line, "bin_start", "bins must be contiguous with a constant width");
    }
    curve.bins.push_back(bin);
  }
  return curve;
}

std::string export_heatmap_csv(const HeatmapGrid& grid) {
  std::string out = "cell_x,cell_y,center_x,center_y,sent,delivered,pdr\n";
  for (const auto& c : grid.cells) {
    if (c.sent == 0) continue;
    csv::append_row(out, {std::to_string(c.ix), std::to_string(c.iy), format_double(c.center_x),
                          format_double(c.center_y), std::to_string(c.sent),
                          std::to_string(c.delivered), optional_text(c.pdr)});
  }
  return out;
}

HeatmapGrid parse_heatmap_csv(std::string_view document, double cell) {
  if (!(cell > 0.0)) throw DomainError("heatmap cell must be positive");
  const csv::Table table = csv::read(document);
  if (table.header.empty()) throw ParseError(0, "", "empty heatmap document");
  const csv::Columns cols(table.header);
  const std::size_t c_ix = cols.require({"cell_x"});
  const std::size_t c_iy = cols.require({"cell_y"});
  const std::size_t c_cx = cols.require({"center_x"});
  const std::size_t c_cy = cols.require({"center_y"});
  const std::size_t c_sent = cols.require({"sent"});
  const std::size_t c_ok = cols.require({"delivered"});
  const std::size_t c_pdr = cols.require({"pdr"});

  HeatmapGrid grid;
  grid.cell = cell;
  for (const auto& row : table.rows) {
    const RowReader r(row, table.header.size());
    HeatmapCell c;
    c.ix = r.integer(c_ix, "cell_x");
    c.iy = r.integer(c_iy, "cell_y");
    c.center_x = r.number(c_cx, "center_x");
    c.center_y = r.number(c_cy, "center_y");
    c.sent = r.count(c_sent, "sent");
    c.delivered = r.count(c_ok, "delivered");
    c.pdr = r.optional_number(c_pdr, "pdr");
    check_pdr(r, c.sent, c.delivered, c.pdr);
    grid.cells.push_back(c);
  }
  return grid;
}

}  // namespace v2xcal
