#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library's propagation or sampling code.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

inline constexpr double kC = 299792458.0;

// Friis/log-distance mean received power (dBm) written out from scratch.
inline double mean_power_dbm(double tx_mw, double gain_tx, double gain_rx, double freq_hz,
                             double loss_db, double d0, double exponent, double d) {
  const double lambda = kC / freq_hz;
  const double pr0_mw =
      tx_mw * gain_tx * gain_rx * lambda * lambda / (16.0 * std::numbers::pi * std::numbers::pi * d0 * d0);
  const double eff = std::max(d, d0);
  return 10.0 * std::log10(pr0_mw) - loss_db - 10.0 * exponent * std::log10(eff / d0);
}

// P(received power >= threshold) when the dB power is Normal(mean, sigma^2)
// and, optionally, the linear power is further multiplied by a unit-mean
// Gamma(m, 1/m) factor. Integrates the Gamma tail against the normal
// density with a composite Simpson rule over +-9 sigma.
inline double delivery_probability(double mean_dbm, double sigma, bool nakagami, double m,
                                   double threshold_dbm) {
  auto gamma_tail = [&](double level_dbm) {
    // P(G >= 10^((T - level)/10)) with G ~ Gamma(m, 1/m): Q(m, m * x).
    const double x = std::pow(10.0, (threshold_dbm - level_dbm) / 10.0);
    return boost::math::gamma_q(m, m * x);
  };
  if (sigma == 0.0) {
    if (!nakagami) return mean_dbm >= threshold_dbm ? 1.0 : 0.0;
    return gamma_tail(mean_dbm);
  }
  if (!nakagami) {
    const boost::math::normal_distribution<double> n(mean_dbm, sigma);
    return boost::math::cdf(boost::math::complement(n, threshold_dbm));
  }
  constexpr int kSteps = 4000;  // even
  const double lo = -9.0;
  const double hi = 9.0;
  const double h = (hi - lo) / kSteps;
  double sum = 0.0;
  for (int i = 0; i <= kSteps; ++i) {
    const double z = lo + i * h;
    const double w = (i == 0 || i == kSteps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    sum += w * phi * gamma_tail(mean_dbm + sigma * z);
  }
  return sum * h / 3.0;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = m2;
  m.skewness = m3 / std::pow(m2, 1.5);
  m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return m;
}

// One-sample Kolmogorov-Smirnov statistic against `cdf`.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

// Great-circle distance on a sphere of radius 6371 km.
inline double haversine(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kR = 6371000.0;
  const double to_rad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * to_rad;
  const double dlon = (lon2 - lon1) * to_rad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * to_rad) * std::cos(lat2 * to_rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kR * std::asin(std::min(1.0, std::sqrt(a)));
}

inline std::vector<double> ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

struct Correlation {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, t approximation
};

inline Correlation spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  Correlation c;
  c.rho = sab / std::sqrt(saa * sbb);
  const double t = c.rho * std::sqrt((n - 2.0) / std::max(1e-300, 1.0 - c.rho * c.rho));
  // Normal approximation to the t tail is adequate for the n we use (> 100).
  const boost::math::normal_distribution<double> z;
  c.p_value = 2.0 * boost::math::cdf(boost::math::complement(z, std::abs(t)));
  return c;
}

}  // namespace oracle
