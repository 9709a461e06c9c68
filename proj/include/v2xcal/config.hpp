#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "v2xcal/calibration.hpp"
#include "v2xcal/geo.hpp"
#include "v2xcal/radio.hpp"
#include "v2xcal/simulator.hpp"
#include "v2xcal/synthetic.hpp"

namespace v2xcal {

// Fully resolved run configuration.
//
// File format: one `key = value` per line, `#` starts a comment. Keys are
// grouped by prefix:
//   preset                      default | calibrated | noise-raised
//   radio.*                     tx_power, antenna_gain_tx, antenna_gain_rx,
//                               carrier_frequency, data_rate, noise_floor,
//                               rx_sensitivity, snr_threshold_{6,12,18,27},
//                               dsrc_profile
//   fading.*                    slow_model, fast_model, alpha, system_loss,
//                               sigma, nakagami_m, reference_distance
//   scenario.*                  rsu_position (x,y,z), bsm_rate, spat_rate,
//                               master_seed, bin_width, heatmap_cell,
//                               pdr_direction (both | bsm | spat)
//   ga.*                        population_size, generations, tournament_size,
//                               crossover_prob, mutation_prob_per_gene,
//                               mutation_sigma_fraction, elite_count,
//                               master_seed, freeze (comma separated genes)
//   trace.*                     rsu_latitude, rsu_longitude, rsu_altitude_ft,
//                               epoch_ms
//   synth.*                     waypoints (x,y,z;x,y,z;...), speeds, duration,
//                               seed, sample_rate, start_time
// A `preset` line is applied before every other key of the same layer.
struct RunConfig {
  ChannelParams channel;
  ScenarioConfig scenario;
  GaConfig ga;
  std::vector<Gene> frozen;
  std::optional<GeodeticPosition> rsu;
  bool epoch_ms = false;
  // Route part of the synthetic recipe; the planted channel is `channel`
  // and the RSU is `rsu`.
  SyntheticSpec synth = default_synthetic_spec();

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig default_run_config();

// Ordered key/value pairs from a configuration document.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

ConfigEntries parse_config_entries(std::string_view document);

// Applies entries in order; a `preset` entry is applied first. Throws
// ConfigError naming the offending key.
void apply_entries(RunConfig& config, const ConfigEntries& entries);
void apply_entry(RunConfig& config, std::string_view key, std::string_view value);

// Every key with its resolved value. Parsing this text on top of
// default_run_config() reproduces `config` exactly.
std::string to_config_text(const RunConfig& config);

// The synthetic recipe implied by the configuration.
SyntheticSpec synthetic_spec(const RunConfig& config);

// Search space with the configured genes pinned to the channel's values.
SearchSpace search_space(const RunConfig& config);

}  // namespace v2xcal
