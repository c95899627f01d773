#pragma once

// Binomial probabilities with high relative accuracy across the whole
// support. Point masses use Loader's saddle-point form (stirlerr + bd0);
// sums are taken in log space or with max-shifted compensated sums.

#include <cmath>
#include <limits>
#include <vector>

#include "smp/core.hpp"

namespace smp {

/// Natural-log probability; -inf encodes probability zero.
struct LogProbability {
  double value = -std::numeric_limits<double>::infinity();

  static LogProbability zero() { return {}; }
  static LogProbability one() { return {0.0}; }
  static LogProbability from_probability(double p);

  double probability() const { return std::exp(value); }
  bool is_zero() const { return value == -std::numeric_limits<double>::infinity(); }
};

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

/// Stirling series remainder log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)].
double stirling_error(Count n);

/// Deviance term x log(x / np) + np - x, accurate when x is close to np.
double binomial_deviance(Count x, double np);

/// log P{Bin(m, p) = k}. Throws std::invalid_argument for k outside [0, m]
/// or p outside [0, 1].
LogProbability binomial_log_pmf(Count m, double p, Count k);

/// log P{Bin(m, p) <= k}; -inf for k < 0 and 0 for k >= m.
LogProbability binomial_log_cdf(Count m, double p, Count k);

/// Exact P{X + offset >= Y} for independent X ~ Bin(m1, p), Y ~ Bin(m2, p).
/// Relative error stays below 1e-12 for results above 1e-300; terms whose
/// point mass is below exp(-800) are dropped.
double comparison_probability(Count m1, Count m2, double p, Count offset);

namespace detail {

inline constexpr double kNegligibleLog = -800.0;

/// Contiguous slice [lo, hi] of the support holding every k whose log mass
/// is at least kNegligibleLog.
struct BinomialWindow {
  Count m = 0;
  Count lo = 0;
  Count hi = 0;
  std::vector<double> log_pmf;  // index k - lo

  double at(Count k) const { return log_pmf[static_cast<std::size_t>(k - lo)]; }
};

BinomialWindow binomial_window(Count m, double p);

/// Point masses of Bin(m, p) over the full support in linear space.
/// Entries below the smallest normal double come back as zero.
std::vector<double> binomial_pmf_vector(Count m, double p);

}  // namespace detail

}  // namespace smp
