#include "smp/special.hpp"

#include <cmath>
#include <stdexcept>

namespace smp {

namespace {

// a * log(a / b) with the 0 log 0 = 0 convention.
double xlog_ratio(double a, double b) {
  if (a == 0.0) return 0.0;
  if (b == 0.0) return kInfinity;
  return a * std::log(a / b);
}

}  // namespace

double kl_bernoulli(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("kl_bernoulli arguments must be probabilities");
  }
  const double d = xlog_ratio(a, b) + xlog_ratio(1.0 - a, 1.0 - b);
  return d < 0.0 ? 0.0 : d;
}

double std_normal_cdf(double t) { return 0.5 * std::erfc(-t * M_SQRT1_2); }

double std_normal_q(double t) { return 0.5 * std::erfc(t * M_SQRT1_2); }

double t_zero(double alpha, double q) {
  if (!(alpha > 0.0)) throw std::invalid_argument("t_zero requires alpha > 0");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("t_zero requires q in (0,1)");
  return std::sqrt(2.0 * alpha * alpha * (1.0 - q) / q);
}

double trichotomy_middle_limit(double alpha, double q) {
  return std_normal_cdf(t_zero(alpha, q));
}

}  // namespace smp
