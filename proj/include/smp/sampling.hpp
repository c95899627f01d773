#pragma once

#include "smp/core.hpp"
#include "smp/rng.hpp"

namespace smp {

/// Exact draw from Bin(m, p). Sequential CDF inversion when m <= 1024 or
/// the mean is below 10; Hormann's BTRS transformed rejection otherwise.
/// p > 1/2 is reflected through m - Bin(m, 1-p).
Count sample_binomial(Count m, double p, RngStream& rng);

namespace detail {

Count sample_binomial_inversion(Count m, double p, RngStream& rng);  // p <= 1/2
Count sample_binomial_btrs(Count m, double p, RngStream& rng);       // p <= 1/2, mp >= 10

}  // namespace detail

}  // namespace smp
