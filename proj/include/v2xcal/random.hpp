#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace v2xcal {

// Counter-free 64-bit generator (Steele, Lea & Flood). Cheap to seed, which
// matters because every packet gets its own stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Hashes a tuple of keys into one seed. Order-sensitive, so
// (seed, 0, 5) and (seed, 5, 0) name different streams.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t k : keys) {
    h = SplitMix64::mix(h ^ SplitMix64::mix(k + 0x9e3779b97f4a7c15ULL));
  }
  return h;
}

// Uniform on the open interval (0, 1); never returns 0, so log() is safe.
template <class Rng>
double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

template <class Rng>
double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_open01(rng);
}

// Standard normal via the Marsaglia polar method. Only sqrt and log are
// involved, which keeps results reproducible across libm implementations
// more reliably than sin/cos based Box-Muller.
template <class Rng>
double standard_normal(Rng& rng) {
  for (;;) {
    const double u = 2.0 * uniform_open01(rng) - 1.0;
    const double v = 2.0 * uniform_open01(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

// Gamma(shape, scale) by Marsaglia & Tsang (2000). For shape < 1 the
// boost X * U^(1/shape) with X ~ Gamma(shape + 1) is applied.
template <class Rng>
double gamma_sample(Rng& rng, double shape, double scale) {
  if (shape < 1.0) {
    const double x = gamma_sample(rng, shape + 1.0, 1.0);
    return scale * x * std::pow(uniform_open01(rng), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = 0.0;
    double v = 0.0;
    do {
      z = standard_normal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open01(rng);
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return scale * d * v;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return scale * d * v;
  }
}

}  // namespace v2xcal
