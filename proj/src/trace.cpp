#include "v2xcal/trace.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "v2xcal/csv.hpp"
#include "v2xcal/error.hpp"
#include "v2xcal/text.hpp"
#include "v2xcal/units.hpp"

namespace v2xcal {

namespace chr = std::chrono;

std::string_view to_string(TransmissionType type) {
  return type == TransmissionType::Dsrc ? "DSRC" : "CV2X";
}

std::string_view to_string(MessageType type) { return type == MessageType::Bsm ? "BSM" : "SPaT"; }

std::string_view to_string(MessageDirection direction) {
  return direction == MessageDirection::Sent ? "Sent" : "Received";
}

std::string format_timestamp(Timestamp time) {
  const auto day = chr::floor<chr::days>(time);
  const chr::year_month_day ymd{day};
  const chr::hh_mm_ss<chr::microseconds> tod{time - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%06lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()),
                static_cast<long long>(tod.subseconds().count()));
  return buf;
}

namespace {

// Reads exactly `width` digits starting at `pos`.
std::optional<int> digits(std::string_view text, std::size_t pos, std::size_t width) {
  if (pos + width > text.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  text = trim(text);
  // YYYY-MM-DDThh:mm:ss is 19 characters.
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  const auto y = digits(text, 0, 4), mo = digits(text, 5, 2), d = digits(text, 8, 2);
  const auto h = digits(text, 11, 2), mi = digits(text, 14, 2), s = digits(text, 17, 2);
  if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
  const chr::year_month_day ymd{chr::year{*y}, chr::month{static_cast<unsigned>(*mo)},
                                chr::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *s > 60) return std::nullopt;

  std::size_t pos = 19;
  long long micros = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int scale = 100000;
    const std::size_t begin = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      micros += (text[pos] - '0') * scale;  // digits past microseconds are truncated
      scale /= 10;
      ++pos;
    }
    if (pos == begin) return std::nullopt;
  }
  chr::minutes offset{0};
  if (pos < text.size()) {
    const char zone = text[pos];
    if (zone == 'Z' || zone == 'z') {
      ++pos;
    } else if (zone == '+' || zone == '-') {
      const auto oh = digits(text, pos + 1, 2);
      const auto om = digits(text, pos + 4, 2);
      if (!oh || !om || text.size() < pos + 6 || text[pos + 3] != ':') return std::nullopt;
      offset = chr::hours{*oh} + chr::minutes{*om};
      if (zone == '-') offset = -offset;
      pos += 6;
    }
  }
  if (pos != text.size()) return std::nullopt;
  return Timestamp{chr::sys_days{ymd}} + chr::hours{*h} + chr::minutes{*mi} + chr::seconds{*s} +
         chr::microseconds{micros} - offset;
}

namespace {

std::optional<TransmissionType> parse_transmission(std::string_view text) {
  const std::string key = to_lower(trim(text));
  if (key == "dsrc") return TransmissionType::Dsrc;
  if (key == "cv2x" || key == "c-v2x" || key == "c_v2x") return TransmissionType::Cv2x;
  return std::nullopt;
}

std::optional<MessageType> parse_message_type(std::string_view text) {
  const std::string key = to_lower(trim(text));
  if (key == "bsm") return MessageType::Bsm;
  if (key == "spat") return MessageType::Spat;
  return std::nullopt;
}

std::optional<MessageDirection> parse_direction(std::string_view text) {
  const std::string key = to_lower(trim(text));
  if (key == "sent" || key == "send" || key == "tx") return MessageDirection::Sent;
  if (key == "received" || key == "receive" || key == "recv" || key == "rx") {
    return MessageDirection::Received;
  }
  return std::nullopt;
}

}  // namespace

Trace parse_trace_csv(std::string_view document, const TraceParseOptions& options) {
  const csv::Table table = csv::read(document);
  if (table.header.empty()) throw ParseError(0, "", "empty trace document");
  const csv::Columns cols(table.header);
  const std::size_t c_time = cols.require({"time", "timestamp", "utc_time", "datetime"});
  const std::size_t c_lat = cols.require({"latitude", "lat"});
  const std::size_t c_lon = cols.require({"longitude", "lon", "lng", "long"});
  const std::size_t c_alt = cols.require({"altitude_ft", "altitude", "altitude (ft)", "alt_ft", "alt"});
  const std::size_t c_heading = cols.require({"heading_deg", "heading"});
  const std::size_t c_speed = cols.require({"speed_mph", "speed", "speed (mph)"});
  const std::size_t c_tx = cols.require(
      {"transmission_type", "message_transmission_type", "transmission", "tx_type"});
  const std::size_t c_msg = cols.require({"message_type", "msg_type", "type"});
  const std::size_t c_dir = cols.require({"direction", "dir"});
  const auto c_id = cols.find({"message_id", "msg_id", "msgid", "id"});

  Trace trace;
  trace.records.reserve(table.rows.size());
  for (const csv::Row& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ParseError(row.line, "",
                       "expected " + std::to_string(table.header.size()) + " fields, found " +
                           std::to_string(row.fields.size()));
    }
    auto number = [&](std::size_t col, const char* name) {
      auto value = parse_double(row.fields[col]);
      if (!value) throw ParseError(row.line, name, "not a number: '" + row.fields[col] + "'");
      return *value;
    };

    TraceRecord rec;
    if (options.epoch_ms) {
      auto ms = parse_int(row.fields[c_time]);
      if (!ms) throw ParseError(row.line, "time", "expected integer epoch milliseconds");
      rec.time = Timestamp{chr::milliseconds{*ms}};
    } else {
      auto ts = parse_timestamp(row.fields[c_time]);
      if (!ts) throw ParseError(row.line, "time", "not an ISO 8601 timestamp: '" + row.fields[c_time] + "'");
      rec.time = *ts;
    }
    rec.latitude = number(c_lat, "latitude");
    if (std::abs(rec.latitude) > 90.0) throw ParseError(row.line, "latitude", "latitude outside [-90, 90]");
    rec.longitude = number(c_lon, "longitude");
    if (std::abs(rec.longitude) > 180.0) {
      throw ParseError(row.line, "longitude", "longitude outside [-180, 180]");
    }
    rec.altitude_ft = number(c_alt, "altitude_ft");
    rec.heading_deg = number(c_heading, "heading_deg");
    if (rec.heading_deg < 0.0 || rec.heading_deg >= 360.0) {
      throw ParseError(row.line, "heading_deg", "heading outside [0, 360)");
    }
    rec.speed_mph = number(c_speed, "speed_mph");
    if (rec.speed_mph < 0.0) throw ParseError(row.line, "speed_mph", "speed must be non-negative");

    auto tx = parse_transmission(row.fields[c_tx]);
    if (!tx) throw ParseError(row.line, "transmission_type", "expected DSRC or CV2X");
    rec.transmission_type = *tx;
    auto msg = parse_message_type(row.fields[c_msg]);
    if (!msg) throw ParseError(row.line, "message_type", "expected BSM or SPaT");
    rec.message_type = *msg;
    auto dir = parse_direction(row.fields[c_dir]);
    if (!dir) throw ParseError(row.line, "direction", "expected Sent or Received");
    rec.direction = *dir;
    if (c_id && !row.fields[*c_id].empty()) rec.message_id = row.fields[*c_id];

    if (!trace.records.empty() && rec.time < trace.records.back().time) {
      throw ParseError(0, "time",
                       "timestamps out of order: row " + std::to_string(row.line) +
                           " is earlier than the row before it");
    }
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

std::string export_trace_csv(const Trace& trace) {
  bool with_id = false;
  for (const auto& r : trace.records) with_id = with_id || r.message_id.has_value();

  std::string out =
      "time,latitude,longitude,altitude_ft,heading_deg,speed_mph,transmission_type,message_type,"
      "direction";
  out += with_id ? ",message_id\n" : "\n";
  for (const auto& r : trace.records) {
    std::vector<std::string> fields{format_timestamp(r.time),
                                    format_double(r.latitude),
                                    format_double(r.longitude),
                                    format_double(r.altitude_ft),
                                    format_double(r.heading_deg),
                                    format_double(r.speed_mph),
                                    std::string(to_string(r.transmission_type)),
                                    std::string(to_string(r.message_type)),
                                    std::string(to_string(r.direction))};
    if (with_id) fields.push_back(r.message_id.value_or(""));
    csv::append_row(out, fields);
  }
  return out;
}

ProjectedTrace project_enu(const Trace& trace) {
  if (!trace.rsu) throw DomainError("trace has no RSU geodetic position");
  ProjectedTrace projected;
  if (trace.records.empty()) return projected;
  projected.start = trace.records.front().time;
  projected.points.reserve(trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    TrackPoint p;
    p.time = chr::duration<double>(r.time - projected.start).count();
    p.position = project({r.latitude, r.longitude, r.altitude_ft}, *trace.rsu);
    p.speed = r.speed_mph * kMetersPerSecondPerMph;
    p.heading_deg = r.heading_deg;
    if (std::hypot(p.position.x, p.position.y) > kMaxProjectionRadius) {
      throw DomainError("record " + std::to_string(i + 1) +
                        " lies more than 50 km from the RSU; projection refused");
    }
    projected.points.push_back(p);
  }
  return projected;
}

}  // namespace v2xcal
