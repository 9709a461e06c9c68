#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "v2xcal/units.hpp"

namespace v2xcal {

enum class DataRate { Mbps6, Mbps12, Mbps18, Mbps27 };

inline constexpr std::array<DataRate, 4> kAllDataRates = {DataRate::Mbps6, DataRate::Mbps12,
                                                          DataRate::Mbps18, DataRate::Mbps27};

int megabits(DataRate rate);
std::optional<DataRate> data_rate_from_megabits(int mbps);

// Minimum SNR (dB) needed to decode at each data rate. Typical 802.11p
// class values; overridable through configuration.
struct SnrTable {
  double mbps6 = 5.0;
  double mbps12 = 11.0;
  double mbps18 = 15.0;
  double mbps27 = 20.0;

  double threshold(DataRate rate) const;
  double& threshold(DataRate rate);

  friend bool operator==(const SnrTable&, const SnrTable&) = default;
};

struct RadioParams {
  double tx_power = 20.0;         // mW
  double antenna_gain_tx = 1.0;   // linear
  double antenna_gain_rx = 1.0;   // linear
  double carrier_frequency = kDsrcCenterFrequency;  // Hz
  DataRate data_rate = DataRate::Mbps6;
  double noise_floor = -110.0;     // dBm
  double rx_sensitivity = -110.0;  // dBm
  SnrTable snr_thresholds{};
  // Restricts carrier_frequency to the 5.9 GHz DSRC band.
  bool dsrc_profile = true;

  double wavelength() const { return kSpeedOfLight / carrier_frequency; }

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

enum class SlowFading { FreeSpaceOnly, Lognormal };
enum class FastFading { None, Nakagami };

struct FadingParams {
  SlowFading slow_model = SlowFading::FreeSpaceOnly;
  FastFading fast_model = FastFading::None;
  double alpha = 1.0;        // path-loss exponent of the log-distance model
  double system_loss = 0.0;  // dB
  double sigma = 2.0;        // dB, Lognormal shadowing standard deviation
  double nakagami_m = 1.0;   // shape factor
  double reference_distance = 1.0;  // m

  friend bool operator==(const FadingParams&, const FadingParams&) = default;
};

struct ChannelParams {
  RadioParams radio;
  FadingParams fading;

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

// Throw DomainError on physically meaningless values.
void validate(const RadioParams& radio);
void validate(const FadingParams& fading);

// Stricter check against the calibration search ranges (alpha in [1, 3],
// system loss in [0, 3], sigma in [1, 10], m in [1, 3.5]).
void validate_search_space(const FadingParams& fading);

// The two value columns of the calibration parameter table.
ChannelParams default_preset();
ChannelParams calibrated_preset();
// Default channel with noise raised to -60 dBm.
ChannelParams noise_raised_preset();
std::optional<ChannelParams> preset_by_name(std::string_view name);

std::string_view to_string(SlowFading model);
std::string_view to_string(FastFading model);
std::optional<SlowFading> slow_fading_from_string(std::string_view text);
std::optional<FastFading> fast_fading_from_string(std::string_view text);

}  // namespace v2xcal
