#include "v2xcal/radio.hpp"

#include <cmath>
#include <string>

#include "v2xcal/error.hpp"
#include "v2xcal/text.hpp"

namespace v2xcal {

int megabits(DataRate rate) {
  switch (rate) {
    case DataRate::Mbps6: return 6;
    case DataRate::Mbps12: return 12;
    case DataRate::Mbps18: return 18;
    case DataRate::Mbps27: return 27;
  }
  return 0;
}

std::optional<DataRate> data_rate_from_megabits(int mbps) {
  for (DataRate rate : kAllDataRates) {
    if (megabits(rate) == mbps) return rate;
  }
  return std::nullopt;
}

double SnrTable::threshold(DataRate rate) const {
  return const_cast<SnrTable*>(this)->threshold(rate);
}

double& SnrTable::threshold(DataRate rate) {
  switch (rate) {
    case DataRate::Mbps6: return mbps6;
    case DataRate::Mbps12: return mbps12;
    case DataRate::Mbps18: return mbps18;
    case DataRate::Mbps27: break;
  }
  return mbps27;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void validate(const RadioParams& radio) {
  require(std::isfinite(radio.tx_power) && radio.tx_power > 0.0 && radio.tx_power <= 1000.0,
          "tx_power must lie in (0, 1000] mW");
  require(std::isfinite(radio.antenna_gain_tx) && radio.antenna_gain_tx > 0.0,
          "antenna_gain_tx must be positive");
  require(std::isfinite(radio.antenna_gain_rx) && radio.antenna_gain_rx > 0.0,
          "antenna_gain_rx must be positive");
  require(std::isfinite(radio.carrier_frequency) && radio.carrier_frequency > 0.0,
          "carrier_frequency must be positive");
  if (radio.dsrc_profile) {
    require(radio.carrier_frequency >= kDsrcBandLow && radio.carrier_frequency <= kDsrcBandHigh,
            "carrier_frequency outside the DSRC band [5.85, 5.925] GHz");
  }
  require(std::isfinite(radio.noise_floor) && radio.noise_floor < 0.0,
          "noise_floor must be below 0 dBm");
  require(std::isfinite(radio.rx_sensitivity) && radio.rx_sensitivity < 0.0,
          "rx_sensitivity must be below 0 dBm");
  for (DataRate rate : kAllDataRates) {
    require(std::isfinite(radio.snr_thresholds.threshold(rate)), "SNR thresholds must be finite");
  }
}

void validate(const FadingParams& fading) {
  require(std::isfinite(fading.alpha) && fading.alpha > 0.0, "alpha must be positive");
  require(std::isfinite(fading.system_loss) && fading.system_loss >= 0.0,
          "system_loss must be non-negative");
  require(std::isfinite(fading.sigma) && fading.sigma >= 0.0, "sigma must be non-negative");
  require(std::isfinite(fading.nakagami_m) && fading.nakagami_m >= 0.5,
          "nakagami_m must be at least 0.5");
  require(std::isfinite(fading.reference_distance) && fading.reference_distance > 0.0,
          "reference_distance must be positive");
}

void validate_search_space(const FadingParams& fading) {
  validate(fading);
  require(fading.alpha >= 1.0 && fading.alpha <= 3.0, "alpha outside [1.0, 3.0]");
  require(fading.system_loss <= 3.0, "system_loss outside [0.0, 3.0] dB");
  require(fading.sigma >= 1.0 && fading.sigma <= 10.0, "sigma outside [1.0, 10.0] dB");
  require(fading.nakagami_m >= 1.0 && fading.nakagami_m <= 3.5, "nakagami_m outside [1.0, 3.5]");
}

ChannelParams default_preset() { return ChannelParams{}; }

ChannelParams calibrated_preset() {
  ChannelParams p;
  p.radio.tx_power = 30.16;
  p.radio.data_rate = DataRate::Mbps18;
  p.radio.noise_floor = -90.0;
  p.radio.rx_sensitivity = -114.0;
  p.fading.slow_model = SlowFading::Lognormal;
  p.fading.fast_model = FastFading::Nakagami;
  p.fading.alpha = 1.51;
  p.fading.system_loss = 0.13;
  p.fading.sigma = 6.03;
  p.fading.nakagami_m = 2.0;
  return p;
}

ChannelParams noise_raised_preset() {
  ChannelParams p;
  p.radio.noise_floor = -60.0;
  return p;
}

std::optional<ChannelParams> preset_by_name(std::string_view name) {
  const std::string key = to_lower(name);
  if (key == "default") return default_preset();
  if (key == "calibrated") return calibrated_preset();
  if (key == "noise-raised") return noise_raised_preset();
  return std::nullopt;
}

std::string_view to_string(SlowFading model) {
  return model == SlowFading::FreeSpaceOnly ? "fsm" : "lognormal";
}

std::string_view to_string(FastFading model) {
  return model == FastFading::None ? "none" : "nakagami";
}

std::optional<SlowFading> slow_fading_from_string(std::string_view text) {
  const std::string key = to_lower(text);
  if (key == "fsm" || key == "freespace" || key == "free_space" || key == "freespaceonly") {
    return SlowFading::FreeSpaceOnly;
  }
  if (key == "lognormal" || key == "lnm") return SlowFading::Lognormal;
  return std::nullopt;
}

std::optional<FastFading> fast_fading_from_string(std::string_view text) {
  const std::string key = to_lower(text);
  if (key == "none" || key == "-") return FastFading::None;
  if (key == "nakagami") return FastFading::Nakagami;
  return std::nullopt;
}

}  // namespace v2xcal
