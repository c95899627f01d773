#pragma once

#include <limits>

namespace smp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Binary KL divergence D(a||b) in nats, with 0 log 0 = 0. Returns
/// kInfinity when b sits on the boundary and a differs from it.
double kl_bernoulli(double a, double b);

/// Standard normal CDF. Uses erfc in both tails so neither side cancels.
double std_normal_cdf(double t);

/// Upper tail 1 - Phi(t).
double std_normal_q(double t);

/// Normal-CDF argument sqrt(2 alpha^2 (1-q) / q) of the exact-order-sqrt(n) regime.
double t_zero(double alpha, double q);

/// Limit of the keep probability when a_n / sqrt(n) -> alpha, reported as
/// Phi(t_zero(alpha, q)).
double trichotomy_middle_limit(double alpha, double q);

}  // namespace smp
