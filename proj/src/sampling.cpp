#include "smp/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "smp/binomial.hpp"

namespace smp {

namespace {

constexpr Count kInversionLimit = 1024;

}  // namespace

namespace detail {

Count sample_binomial_inversion(Count m, double p, RngStream& rng) {
  // (1-p)^m can be subnormal for m near 1024; every mass is carried scaled
  // by e^shift so the walk starts from a normal number.
  const double log_first = static_cast<double>(m) * std::log1p(-p);
  const double shift = log_first < -600.0 ? -600.0 - log_first : 0.0;
  const double scale = std::exp(shift);
  const double first = std::exp(log_first + shift);
  const double odds = p / (1.0 - p);
  for (;;) {
    double u = rng.uniform() * scale;
    double mass = first;
    for (Count k = 0; k <= m; ++k) {
      if (u < mass) return k;
      u -= mass;
      mass *= static_cast<double>(m - k) / static_cast<double>(k + 1) * odds;
    }
    // Only reachable through rounding in the tail; draw again.
  }
}

Count sample_binomial_btrs(Count m, double p, RngStream& rng) {
  const double dm = static_cast<double>(m);
  const double spq = std::sqrt(dm * p * (1.0 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = dm * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const auto mode = static_cast<Count>(std::floor((dm + 1.0) * p));
  const double log_mode_mass = binomial_log_pmf(m, p, mode).value;
  for (;;) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + c);
    if (kf < 0.0 || kf > dm) continue;
    const auto k = static_cast<Count>(kf);
    if (us >= 0.07 && v <= v_r) return k;
    v = std::log(v * alpha / (a / (us * us) + b));
    if (v <= binomial_log_pmf(m, p, k).value - log_mode_mass) return k;
  }
}

}  // namespace detail

Count sample_binomial(Count m, double p, RngStream& rng) {
  if (m < 0) throw std::invalid_argument("binomial trial count must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial probability must lie in [0,1]");
  if (m == 0 || p == 0.0) return 0;
  if (p == 1.0) return m;
  if (p > 0.5) return m - sample_binomial(m, 1.0 - p, rng);
  if (m <= kInversionLimit || static_cast<double>(m) * p < 10.0) {
    return detail::sample_binomial_inversion(m, p, rng);
  }
  return detail::sample_binomial_btrs(m, p, rng);
}

}  // namespace smp
