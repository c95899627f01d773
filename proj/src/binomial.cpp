#include "smp/binomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "smp/summation.hpp"

namespace smp {

namespace {

constexpr double kLn2Pi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Once a tail's remaining mass is below exp(-40) of what has been summed it
// no longer moves a double.
constexpr double kTailStop = -40.0;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binomial success probability must lie in [0,1]");
  }
}

const std::array<double, 16>& small_stirling_errors() {
  static const std::array<double, 16> table = [] {
    std::array<double, 16> t{};
    const long double half_log_2pi = 0.5L * std::log(2.0L * 3.14159265358979323846264338327950288L);
    for (int n = 1; n < 16; ++n) {
      const long double ln = n;
      t[static_cast<std::size_t>(n)] = static_cast<double>(
          std::lgamma(ln + 1.0L) - (ln + 0.5L) * std::log(ln) + ln - half_log_2pi);
    }
    return t;
  }();
  return table;
}

Count mode_of(Count m, double p) {
  const auto mode = static_cast<Count>(std::floor(static_cast<double>(m + 1) * p));
  return std::clamp<Count>(mode, 0, m);
}

// Unchecked log point mass for p strictly inside (0, 1).
double log_pmf_interior(Count m, double p, Count k) {
  if (k == 0) return static_cast<double>(m) * std::log1p(-p);
  if (k == m) return static_cast<double>(m) * std::log(p);
  const double dm = static_cast<double>(m);
  const double dk = static_cast<double>(k);
  const double lc = stirling_error(m) - stirling_error(k) - stirling_error(m - k) -
                    binomial_deviance(k, dm * p) - binomial_deviance(m - k, dm * (1.0 - p));
  return lc + 0.5 * (std::log(dm / (dk * (dm - dk))) - kLn2Pi);
}

// Sum of exp(log_pmf(j)) over the tail that starts at `start` and moves by
// `step` (+1 or -1) away from the mode. Returned in log space.
double log_tail_sum(Count m, double p, Count start, int step) {
  const double anchor = log_pmf_interior(m, p, start);
  CompensatedSum sum(1.0);
  double previous = anchor;
  for (Count j = start + step; j >= 0 && j <= m; j += step) {
    const double lp = log_pmf_interior(m, p, j);
    sum.add(std::exp(lp - anchor));
    const double log_ratio = lp - previous;
    previous = lp;
    // Log-concavity: later ratios are no larger, so the rest of the tail is
    // at most pmf(j) * r / (1 - r).
    if (log_ratio < 0.0) {
      const double r = std::exp(log_ratio);
      const double rest = lp - anchor + std::log(r) - std::log1p(-r);
      if (rest < kTailStop + std::log(sum.value())) break;
    }
  }
  return anchor + std::log(sum.value());
}

}  // namespace

LogProbability LogProbability::from_probability(double p) {
  check_probability(p);
  return {p == 0.0 ? kNegInf : std::log(p)};
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double stirling_error(Count n) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n < 0) throw std::invalid_argument("stirling_error requires n >= 0");
  if (n < 16) return small_stirling_errors()[static_cast<std::size_t>(n)];
  const double nn = static_cast<double>(n);
  const double n2 = 1.0 / (nn * nn);
  if (n > 500) return (s0 - s1 * n2) / nn;
  if (n > 80) return (s0 - (s1 - s2 * n2) * n2) / nn;
  if (n > 35) return (s0 - (s1 - (s2 - s3 * n2) * n2) * n2) / nn;
  return (s0 - (s1 - (s2 - (s3 - s4 * n2) * n2) * n2) * n2) / nn;
}

double binomial_deviance(Count x, double np) {
  const double dx = static_cast<double>(x);
  if (x == 0) return np;
  if (std::fabs(dx - np) < 0.1 * (dx + np)) {
    const double v = (dx - np) / (dx + np);
    double s = (dx - np) * v;
    double ej = 2.0 * dx * v;
    const double v2 = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return dx * std::log(dx / np) + np - dx;
}

LogProbability binomial_log_pmf(Count m, double p, Count k) {
  check_probability(p);
  if (m < 0) throw std::invalid_argument("binomial trial count must be nonnegative");
  if (k < 0 || k > m) throw std::invalid_argument("binomial outcome must lie in [0, m]");
  if (p == 0.0) return k == 0 ? LogProbability::one() : LogProbability::zero();
  if (p == 1.0) return k == m ? LogProbability::one() : LogProbability::zero();
  return {log_pmf_interior(m, p, k)};
}

LogProbability binomial_log_cdf(Count m, double p, Count k) {
  check_probability(p);
  if (m < 0) throw std::invalid_argument("binomial trial count must be nonnegative");
  if (k < 0) return LogProbability::zero();
  if (k >= m) return LogProbability::one();
  if (p == 0.0) return LogProbability::one();
  if (p == 1.0) return LogProbability::zero();
  if (k < mode_of(m, p)) return {log_tail_sum(m, p, k, -1)};
  const double upper = std::exp(log_tail_sum(m, p, k + 1, +1));
  return {std::min(0.0, std::log1p(-std::min(upper, 1.0)))};
}

namespace detail {

BinomialWindow binomial_window(Count m, double p) {
  check_probability(p);
  if (m < 0) throw std::invalid_argument("binomial trial count must be nonnegative");
  BinomialWindow w;
  w.m = m;
  if (p == 0.0 || p == 1.0) {
    w.lo = w.hi = (p == 0.0 ? 0 : m);
    w.log_pmf = {0.0};
    return w;
  }
  const Count mode = mode_of(m, p);
  std::vector<double> below;
  for (Count k = mode - 1; k >= 0; --k) {
    const double lp = log_pmf_interior(m, p, k);
    if (lp < kNegligibleLog) break;
    below.push_back(lp);
  }
  w.lo = mode - static_cast<Count>(below.size());
  w.log_pmf.assign(below.rbegin(), below.rend());
  w.log_pmf.push_back(log_pmf_interior(m, p, mode));
  w.hi = mode;
  for (Count k = mode + 1; k <= m; ++k) {
    const double lp = log_pmf_interior(m, p, k);
    if (lp < kNegligibleLog) break;
    w.log_pmf.push_back(lp);
    w.hi = k;
  }
  return w;
}

std::vector<double> binomial_pmf_vector(Count m, double p) {
  const BinomialWindow w = binomial_window(m, p);
  std::vector<double> pmf(static_cast<std::size_t>(m + 1), 0.0);
  for (Count k = w.lo; k <= w.hi; ++k) {
    pmf[static_cast<std::size_t>(k)] = std::exp(w.at(k));
  }
  return pmf;
}

}  // namespace detail

double comparison_probability(Count m1, Count m2, double p, Count offset) {
  check_probability(p);
  if (m1 < 0 || m2 < 0) throw std::invalid_argument("binomial trial counts must be nonnegative");
  if (p == 0.0) return offset >= 0 ? 1.0 : 0.0;
  if (p == 1.0) return m1 + offset >= m2 ? 1.0 : 0.0;

  const detail::BinomialWindow wx = detail::binomial_window(m1, p);
  const detail::BinomialWindow wy = detail::binomial_window(m2, p);

  // log P{Y <= j} for j in the Y window. The running sum is kept relative to
  // a scale that is raised whenever the prefix outgrows it by e^300.
  std::vector<double> log_cdf_y(wy.log_pmf.size());
  {
    double scale = wy.log_pmf.front();
    CompensatedSum prefix;
    for (std::size_t i = 0; i < wy.log_pmf.size(); ++i) {
      const double lp = wy.log_pmf[i];
      if (lp > scale + 300.0) {
        prefix.scale(std::exp(scale - lp));
        scale = lp;
      }
      prefix.add(std::exp(lp - scale));
      log_cdf_y[i] = std::min(0.0, scale + std::log(prefix.value()));
    }
  }

  std::vector<double> terms;
  terms.reserve(wx.log_pmf.size());
  for (Count k = wx.lo; k <= wx.hi; ++k) {
    const Count j = k + offset;
    double lc;
    if (j >= m2) {
      lc = 0.0;
    } else if (j < wy.lo) {
      continue;
    } else if (j >= wy.hi) {
      lc = log_cdf_y.back();
    } else {
      lc = log_cdf_y[static_cast<std::size_t>(j - wy.lo)];
    }
    terms.push_back(wx.at(k) + lc);
  }
  if (terms.empty()) return 0.0;
  const double top = *std::max_element(terms.begin(), terms.end());
  CompensatedSum total;
  for (double t : terms) total.add(std::exp(t - top));
  return std::min(1.0, std::exp(top) * total.value());
}

}  // namespace smp
