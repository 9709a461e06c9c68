#include "v2xcal/config.hpp"

#include <algorithm>
#include <functional>

#include "v2xcal/error.hpp"
#include "v2xcal/text.hpp"

namespace v2xcal {

RunConfig default_run_config() {
  RunConfig config;
  config.synth.planted = config.channel;
  return config;
}

ConfigEntries parse_config_entries(std::string_view document) {
  ConfigEntries entries;
  std::size_t line_no = 0;
  for (const auto& raw : split(document, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    entries.emplace_back(to_lower(key), std::string(trim(line.substr(eq + 1))));
  }
  return entries;
}

namespace {

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + ": " +
                    std::string(why));
}

double number(std::string_view key, std::string_view value) {
  auto v = parse_double(value);
  if (!v) bad(key, value, "expected a number");
  return *v;
}

std::uint64_t unsigned_number(std::string_view key, std::string_view value) {
  auto v = parse_uint(value);
  if (!v) bad(key, value, "expected a non-negative integer");
  return *v;
}

bool boolean(std::string_view key, std::string_view value) {
  const std::string v = to_lower(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, value, "expected true or false");
}

std::vector<double> number_list(std::string_view key, std::string_view value, char sep) {
  std::vector<double> out;
  for (const auto& part : split(value, sep)) {
    if (trim(part).empty()) continue;
    out.push_back(number(key, part));
  }
  return out;
}

Enu enu(std::string_view key, std::string_view value) {
  const auto xyz = number_list(key, value, ',');
  if (xyz.size() != 2 && xyz.size() != 3) bad(key, value, "expected x,y or x,y,z");
  return {xyz[0], xyz[1], xyz.size() == 3 ? xyz[2] : 0.0};
}

std::string enu_text(const Enu& p) {
  return format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.z);
}

GeodeticPosition& rsu_of(RunConfig& c) {
  if (!c.rsu) c.rsu = GeodeticPosition{};
  return *c.rsu;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"radio.tx_power", [](RunConfig& c, auto k, auto v) { c.channel.radio.tx_power = number(k, v); }},
      {"radio.antenna_gain_tx",
       [](RunConfig& c, auto k, auto v) { c.channel.radio.antenna_gain_tx = number(k, v); }},
      {"radio.antenna_gain_rx",
       [](RunConfig& c, auto k, auto v) { c.channel.radio.antenna_gain_rx = number(k, v); }},
      {"radio.carrier_frequency",
       [](RunConfig& c, auto k, auto v) { c.channel.radio.carrier_frequency = number(k, v); }},
      {"radio.data_rate",
       [](RunConfig& c, auto k, auto v) {
         auto rate = data_rate_from_megabits(static_cast<int>(unsigned_number(k, v)));
         if (!rate) bad(k, v, "expected 6, 12, 18 or 27");
         c.channel.radio.data_rate = *rate;
       }},
      {"radio.noise_floor", [](RunConfig& c, auto k, auto v) { c.channel.radio.noise_floor = number(k, v); }},
      {"radio.rx_sensitivity",
       [](RunConfig& c, auto k, auto v) { c.channel.radio.rx_sensitivity = number(k, v); }},
      {"radio.snr_threshold_6",
       [](RunConfig& c, auto k, auto v) { c.channel.radio.snr_thresholds.mbps6 = number(k, v); }},
      {"radio.snr_threshold_12",
       [](RunConfig& c, auto k, auto v) { c.channel.radio.snr_thresholds.mbps12 = number(k, v); }},
      {"radio.snr_threshold_18",
       [](RunConfig& c, auto k, auto v) { c.channel.radio.snr_thresholds.mbps18 = number(k, v); }},
      {"radio.snr_threshold_27",
       [](RunConfig& c, auto k, auto v) { c.channel.radio.snr_thresholds.mbps27 = number(k, v); }},
      {"radio.dsrc_profile", [](RunConfig& c, auto k, auto v) { c.channel.radio.dsrc_profile = boolean(k, v); }},
      {"fading.slow_model",
       [](RunConfig& c, auto k, auto v) {
         auto m = slow_fading_from_string(v);
         if (!m) bad(k, v, "expected fsm or lognormal");
         c.channel.fading.slow_model = *m;
       }},
      {"fading.fast_model",
       [](RunConfig& c, auto k, auto v) {
         auto m = fast_fading_from_string(v);
         if (!m) bad(k, v, "expected none or nakagami");
         c.channel.fading.fast_model = *m;
       }},
      {"fading.alpha", [](RunConfig& c, auto k, auto v) { c.channel.fading.alpha = number(k, v); }},
      {"fading.system_loss", [](RunConfig& c, auto k, auto v) { c.channel.fading.system_loss = number(k, v); }},
      {"fading.sigma", [](RunConfig& c, auto k, auto v) { c.channel.fading.sigma = number(k, v); }},
      {"fading.nakagami_m", [](RunConfig& c, auto k, auto v) { c.channel.fading.nakagami_m = number(k, v); }},
      {"fading.reference_distance",
       [](RunConfig& c, auto k, auto v) { c.channel.fading.reference_distance = number(k, v); }},
      {"scenario.rsu_position", [](RunConfig& c, auto k, auto v) { c.scenario.rsu_position = enu(k, v); }},
      {"scenario.bsm_rate", [](RunConfig& c, auto k, auto v) { c.scenario.bsm_rate = number(k, v); }},
      {"scenario.spat_rate", [](RunConfig& c, auto k, auto v) { c.scenario.spat_rate = number(k, v); }},
      {"scenario.master_seed", [](RunConfig& c, auto k, auto v) { c.scenario.master_seed = unsigned_number(k, v); }},
      {"scenario.bin_width", [](RunConfig& c, auto k, auto v) { c.scenario.bin_width = number(k, v); }},
      {"scenario.heatmap_cell", [](RunConfig& c, auto k, auto v) { c.scenario.heatmap_cell = number(k, v); }},
      {"scenario.pdr_direction",
       [](RunConfig& c, auto k, auto v) {
         const std::string d = to_lower(v);
         if (d == "both") {
           c.scenario.pdr_direction = DirectionFilter::Both;
         } else if (d == "bsm") {
           c.scenario.pdr_direction = DirectionFilter::VehicleToRsu;
         } else if (d == "spat") {
           c.scenario.pdr_direction = DirectionFilter::RsuToVehicle;
         } else {
           bad(k, v, "expected both, bsm or spat");
         }
       }},
      {"ga.population_size", [](RunConfig& c, auto k, auto v) { c.ga.population_size = unsigned_number(k, v); }},
      {"ga.generations", [](RunConfig& c, auto k, auto v) { c.ga.generations = unsigned_number(k, v); }},
      {"ga.tournament_size", [](RunConfig& c, auto k, auto v) { c.ga.tournament_size = unsigned_number(k, v); }},
      {"ga.crossover_prob", [](RunConfig& c, auto k, auto v) { c.ga.crossover_prob = number(k, v); }},
      {"ga.mutation_prob_per_gene",
       [](RunConfig& c, auto k, auto v) { c.ga.mutation_prob_per_gene = number(k, v); }},
      {"ga.mutation_sigma_fraction",
       [](RunConfig& c, auto k, auto v) { c.ga.mutation_sigma_fraction = number(k, v); }},
      {"ga.elite_count", [](RunConfig& c, auto k, auto v) { c.ga.elite_count = unsigned_number(k, v); }},
      {"ga.master_seed", [](RunConfig& c, auto k, auto v) { c.ga.master_seed = unsigned_number(k, v); }},
      {"ga.freeze",
       [](RunConfig& c, auto k, auto v) {
         c.frozen.clear();
         for (const auto& part : split(v, ',')) {
           if (trim(part).empty()) continue;
           auto gene = gene_from_name(part);
           if (!gene) bad(k, v, "unknown gene '" + std::string(trim(part)) + "'");
           if (std::find(c.frozen.begin(), c.frozen.end(), *gene) == c.frozen.end()) c.frozen.push_back(*gene);
         }
       }},
      {"trace.rsu_latitude", [](RunConfig& c, auto k, auto v) { rsu_of(c).latitude = number(k, v); }},
      {"trace.rsu_longitude", [](RunConfig& c, auto k, auto v) { rsu_of(c).longitude = number(k, v); }},
      {"trace.rsu_altitude_ft", [](RunConfig& c, auto k, auto v) { rsu_of(c).altitude_ft = number(k, v); }},
      {"trace.epoch_ms", [](RunConfig& c, auto k, auto v) { c.epoch_ms = boolean(k, v); }},
      {"synth.waypoints",
       [](RunConfig& c, auto k, auto v) {
         c.synth.waypoints.clear();
         for (const auto& part : split(v, ';')) {
           if (trim(part).empty()) continue;
           c.synth.waypoints.push_back(enu(k, part));
         }
       }},
      {"synth.speeds", [](RunConfig& c, auto k, auto v) { c.synth.speeds = number_list(k, v, ','); }},
      {"synth.duration", [](RunConfig& c, auto k, auto v) { c.synth.duration = number(k, v); }},
      {"synth.seed", [](RunConfig& c, auto k, auto v) { c.synth.seed = unsigned_number(k, v); }},
      {"synth.sample_rate", [](RunConfig& c, auto k, auto v) { c.synth.sample_rate = number(k, v); }},
      {"synth.start_time",
       [](RunConfig& c, auto k, auto v) {
         auto ts = parse_timestamp(v);
         if (!ts) bad(k, v, "expected an ISO 8601 timestamp");
         c.synth.start_time = *ts;
       }},
  };
  return table;
}

}  // namespace

void apply_entry(RunConfig& config, std::string_view key, std::string_view value) {
  const std::string k = to_lower(trim(key));
  if (k == "preset") {
    auto preset = preset_by_name(value);
    if (!preset) bad(k, value, "expected default, calibrated or noise-raised");
    // A preset binds the gene columns only; non-gene radio fields stay.
    const ChannelParams p = *preset;
    auto& ch = config.channel;
    ch.radio.tx_power = p.radio.tx_power;
    ch.radio.data_rate = p.radio.data_rate;
    ch.radio.noise_floor = p.radio.noise_floor;
    ch.radio.rx_sensitivity = p.radio.rx_sensitivity;
    ch.fading.slow_model = p.fading.slow_model;
    ch.fading.fast_model = p.fading.fast_model;
    ch.fading.alpha = p.fading.alpha;
    ch.fading.system_loss = p.fading.system_loss;
    ch.fading.sigma = p.fading.sigma;
    ch.fading.nakagami_m = p.fading.nakagami_m;
    return;
  }
  const auto& table = setters();
  const auto it = table.find(k);
  if (it == table.end()) throw ConfigError("unknown configuration key '" + k + "'");
  it->second(config, k, trim(value));
}

void apply_entries(RunConfig& config, const ConfigEntries& entries) {
  for (const auto& [k, v] : entries) {
    if (to_lower(k) == "preset") apply_entry(config, k, v);
  }
  for (const auto& [k, v] : entries) {
    if (to_lower(k) != "preset") apply_entry(config, k, v);
  }
}

std::string to_config_text(const RunConfig& c) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  const auto& r = c.channel.radio;
  const auto& f = c.channel.fading;
  line("radio.tx_power", format_double(r.tx_power));
  line("radio.antenna_gain_tx", format_double(r.antenna_gain_tx));
  line("radio.antenna_gain_rx", format_double(r.antenna_gain_rx));
  line("radio.carrier_frequency", format_double(r.carrier_frequency));
  line("radio.data_rate", std::to_string(megabits(r.data_rate)));
  line("radio.noise_floor", format_double(r.noise_floor));
  line("radio.rx_sensitivity", format_double(r.rx_sensitivity));
  line("radio.snr_threshold_6", format_double(r.snr_thresholds.mbps6));
  line("radio.snr_threshold_12", format_double(r.snr_thresholds.mbps12));
  line("radio.snr_threshold_18", format_double(r.snr_thresholds.mbps18));
  line("radio.snr_threshold_27", format_double(r.snr_thresholds.mbps27));
  line("radio.dsrc_profile", r.dsrc_profile ? "true" : "false");
  line("fading.slow_model", std::string(to_string(f.slow_model)));
  line("fading.fast_model", std::string(to_string(f.fast_model)));
  line("fading.alpha", format_double(f.alpha));
  line("fading.system_loss", format_double(f.system_loss));
  line("fading.sigma", format_double(f.sigma));
  line("fading.nakagami_m", format_double(f.nakagami_m));
  line("fading.reference_distance", format_double(f.reference_distance));
  const auto& s = c.scenario;
  line("scenario.rsu_position", enu_text(s.rsu_position));
  line("scenario.bsm_rate", format_double(s.bsm_rate));
  line("scenario.spat_rate", format_double(s.spat_rate));
  line("scenario.master_seed", std::to_string(s.master_seed));
  line("scenario.bin_width", format_double(s.bin_width));
  line("scenario.heatmap_cell", format_double(s.heatmap_cell));
  line("scenario.pdr_direction", s.pdr_direction == DirectionFilter::Both           ? "both"
                                 : s.pdr_direction == DirectionFilter::VehicleToRsu ? "bsm"
                                                                                    : "spat");
  const auto& g = c.ga;
  line("ga.population_size", std::to_string(g.population_size));
  line("ga.generations", std::to_string(g.generations));
  line("ga.tournament_size", std::to_string(g.tournament_size));
  line("ga.crossover_prob", format_double(g.crossover_prob));
  line("ga.mutation_prob_per_gene", format_double(g.mutation_prob_per_gene));
  line("ga.mutation_sigma_fraction", format_double(g.mutation_sigma_fraction));
  line("ga.elite_count", std::to_string(g.elite_count));
  line("ga.master_seed", std::to_string(g.master_seed));
  std::string frozen;
  for (Gene gene : c.frozen) {
    if (!frozen.empty()) frozen += ',';
    frozen += gene_name(gene);
  }
  line("ga.freeze", frozen);
  if (c.rsu) {
    line("trace.rsu_latitude", format_double(c.rsu->latitude));
    line("trace.rsu_longitude", format_double(c.rsu->longitude));
    line("trace.rsu_altitude_ft", format_double(c.rsu->altitude_ft));
  }
  line("trace.epoch_ms", c.epoch_ms ? "true" : "false");
  std::string waypoints;
  for (const auto& w : c.synth.waypoints) {
    if (!waypoints.empty()) waypoints += ';';
    waypoints += enu_text(w);
  }
  line("synth.waypoints", waypoints);
  std::string speeds;
  for (double v : c.synth.speeds) {
    if (!speeds.empty()) speeds += ',';
    speeds += format_double(v);
  }
  line("synth.speeds", speeds);
  line("synth.duration", format_double(c.synth.duration));
  line("synth.seed", std::to_string(c.synth.seed));
  line("synth.sample_rate", format_double(c.synth.sample_rate));
  line("synth.start_time", format_timestamp(c.synth.start_time));
  return out;
}

SyntheticSpec synthetic_spec(const RunConfig& config) {
  SyntheticSpec spec = config.synth;
  spec.planted = config.channel;
  if (config.rsu) spec.rsu = *config.rsu;
  return spec;
}

SearchSpace search_space(const RunConfig& config) {
  SearchSpace space = table_search_space();
  const Genome pinned = genome_from(config.channel);
  for (Gene gene : config.frozen) space.freeze(gene, pinned.get(gene));
  return space;
}

}  // namespace v2xcal
