#pragma once

#include "v2xcal/radio.hpp"
#include "v2xcal/random.hpp"

namespace v2xcal {

// Received power at the reference distance from the Friis free-space
// equation, in dBm: P_t G_t G_r lambda^2 / ((4 pi)^2 d0^2 L).
double free_space_rx_power(const RadioParams& radio, const FadingParams& fading);

// Non-random received power at `distance`, in dBm. FreeSpaceOnly extends
// the Friis equation with its inverse-square law; Lognormal uses the
// log-distance decay P_r(d0) - 10 alpha log10(d / d0). Distances below the
// reference distance are clamped to it.
double mean_rx_power(const RadioParams& radio, const FadingParams& fading, double distance);

// Deterministic part of P_r(d) - P_t, in dB. Positive values mean the
// model amplifies the signal and callers must treat that as invalid.
double deterministic_gain_db(const RadioParams& radio, const FadingParams& fading, double distance);

// Log-distance received power plus zero-mean normal shadowing with
// standard deviation sigma (dB).
double lognormal_rx_power(const RadioParams& radio, const FadingParams& fading, double distance,
                          SplitMix64& rng);

// One Nakagami-m power sample (mW). The squared Nakagami envelope is
// Gamma(m, omega / m), so E[P] = omega and Var[P] = omega^2 / m.
double nakagami_power_sample(double omega, double m, SplitMix64& rng);

// Random streams consumed by one packet. Shadowing and fast fading draw
// from separate streams so toggling one model never shifts the other's
// samples.
struct FadingStreams {
  SplitMix64 shadowing;
  SplitMix64 fast;
};

// Slow fading stage followed by the optional Nakagami stage, in dBm.
double cascade_rx_power(const RadioParams& radio, const FadingParams& fading, double distance,
                        FadingStreams& streams);

enum class ReceptionReason { Delivered, BelowSensitivity, BelowSnr };

struct Reception {
  bool delivered;
  ReceptionReason reason;
};

// Delivered iff rx_power >= sensitivity and rx_power - noise >= the SNR
// threshold of the configured data rate. Both comparisons are inclusive.
Reception is_received(double rx_power, const RadioParams& radio);

// Received power level at which reception flips, in dBm.
double reception_threshold(const RadioParams& radio);

}  // namespace v2xcal
