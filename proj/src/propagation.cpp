#include "v2xcal/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "v2xcal/error.hpp"

namespace v2xcal {

namespace {

void check_distance(double distance) {
  if (!std::isfinite(distance) || distance < 0.0) {
    throw DomainError("distance must be finite and non-negative");
  }
}

double log_distance_ratio(const FadingParams& fading, double distance) {
  return std::log10(std::max(distance, fading.reference_distance) / fading.reference_distance);
}

}  // namespace

double free_space_rx_power(const RadioParams& radio, const FadingParams& fading) {
  validate(radio);
  validate(fading);
  const double four_pi_d0 = 4.0 * std::numbers::pi * fading.reference_distance;
  const double spreading = radio.wavelength() / four_pi_d0;
  return mw_to_dbm(radio.tx_power) + to_db(radio.antenna_gain_tx) + to_db(radio.antenna_gain_rx) +
         20.0 * std::log10(spreading) - fading.system_loss;
}

double mean_rx_power(const RadioParams& radio, const FadingParams& fading, double distance) {
  check_distance(distance);
  const double exponent = fading.slow_model == SlowFading::FreeSpaceOnly ? 2.0 : fading.alpha;
  return free_space_rx_power(radio, fading) - 10.0 * exponent * log_distance_ratio(fading, distance);
}

double deterministic_gain_db(const RadioParams& radio, const FadingParams& fading, double distance) {
  return mean_rx_power(radio, fading, distance) - mw_to_dbm(radio.tx_power);
}

double lognormal_rx_power(const RadioParams& radio, const FadingParams& fading, double distance,
                          SplitMix64& rng) {
  check_distance(distance);
  const double decayed =
      free_space_rx_power(radio, fading) - 10.0 * fading.alpha * log_distance_ratio(fading, distance);
  if (fading.sigma == 0.0) return decayed;
  return decayed + fading.sigma * standard_normal(rng);
}

double nakagami_power_sample(double omega, double m, SplitMix64& rng) {
  if (!std::isfinite(omega) || omega <= 0.0) throw DomainError("omega must be positive");
  if (!std::isfinite(m) || m < 0.5) throw DomainError("Nakagami m must be at least 0.5");
  return gamma_sample(rng, m, omega / m);
}

double cascade_rx_power(const RadioParams& radio, const FadingParams& fading, double distance,
                        FadingStreams& streams) {
  const double slow = fading.slow_model == SlowFading::FreeSpaceOnly
                          ? mean_rx_power(radio, fading, distance)
                          : lognormal_rx_power(radio, fading, distance, streams.shadowing);
  if (fading.fast_model == FastFading::None) return slow;
  return mw_to_dbm(nakagami_power_sample(dbm_to_mw(slow), fading.nakagami_m, streams.fast));
}

Reception is_received(double rx_power, const RadioParams& radio) {
  if (!(rx_power >= radio.rx_sensitivity)) return {false, ReceptionReason::BelowSensitivity};
  if (!(rx_power - radio.noise_floor >= radio.snr_thresholds.threshold(radio.data_rate))) {
    return {false, ReceptionReason::BelowSnr};
  }
  return {true, ReceptionReason::Delivered};
}

double reception_threshold(const RadioParams& radio) {
  return std::max(radio.rx_sensitivity,
                  radio.noise_floor + radio.snr_thresholds.threshold(radio.data_rate));
}

}  // namespace v2xcal
