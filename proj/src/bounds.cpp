#include "smp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smp/binomial.hpp"
#include "smp/special.hpp"
#include "smp/transition.hpp"

namespace smp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

void require_open_unit(double q, const char* what) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument(std::string(what) + " requires q in (0,1)");
}

}  // namespace

std::string to_string(BoundName name) {
  switch (name) {
    case BoundName::prop1:
      return "prop1";
    case BoundName::prop4:
      return "prop4";
    case BoundName::prop5:
      return "prop5";
    case BoundName::pn_sandwich:
      return "pn_sandwich";
    case BoundName::stirling_bracket:
      return "stirling_bracket";
    case BoundName::theorem2_envelope:
      return "theorem2_envelope";
  }
  return "unknown";
}

BoundName bound_name_from_string(const std::string& s) {
  for (BoundName b : {BoundName::prop1, BoundName::prop4, BoundName::prop5, BoundName::pn_sandwich,
                      BoundName::stirling_bracket, BoundName::theorem2_envelope}) {
    if (to_string(b) == s) return b;
  }
  throw std::invalid_argument("unknown bound name: " + s);
}

void BoundReport::attach(double empirical) {
  empirical_value = empirical;
  bool ok = empirical <= bound_value;
  if (lower_value) ok = ok && *lower_value <= empirical;
  satisfied = ok;
}

double prop1_error_bound(Count n, Count A, double q) {
  if (n < 1) throw std::invalid_argument("prop1 bound requires n >= 1");
  if (A < 0 || A >= n) throw std::invalid_argument("prop1 bound requires 0 <= A < n");
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("prop1 bound requires q in [0,1)");
  const double dn = static_cast<double>(n);
  const double da = static_cast<double>(A);
  return 2.0 * dn * std::sqrt((dn + da) / (dn - da)) * std::exp(-(1.0 - q) * da * da / dn);
}

double prop4_bound(Count n, Count B) {
  if (n < 1) throw std::invalid_argument("prop4 bound requires n >= 1");
  if (B < 0) throw std::invalid_argument("prop4 bound requires B >= 0");
  const double db = static_cast<double>(B);
  return 2.0 * std::exp(-db * db / static_cast<double>(n));
}

double f_q(double q) {
  require_open_unit(q, "f_q");
  return 32.0 / std::min(q, 1.0 - q);
}

double theorem2_exponent(double q) { return 0.5 / f_q(q); }

double theorem2_envelope(Count n, double q) {
  if (n < 1) throw std::invalid_argument("theorem2 envelope requires n >= 1");
  return 3.0 / std::pow(static_cast<double>(n), theorem2_exponent(q));
}

double prop5_bound(Count n, Count C, double q) {
  require_open_unit(q, "prop5 bound");
  if (C < 0 || C >= n) throw std::invalid_argument("prop5 bound requires 0 <= C < n");
  const double c2 = static_cast<double>(C) * static_cast<double>(C);
  const double inner = std::exp(-f_q(q) * c2 / static_cast<double>(n - C));
  return std::exp(-c2 * inner);
}

double pn_remainder(Count n, double q) {
  require_open_unit(q, "pn remainder");
  if (n < 1) throw std::invalid_argument("pn remainder requires n >= 1");
  const double qq = std::max(q, 1.0 - q);
  const double dn = static_cast<double>(n);
  const double eps = std::pow(dn, -0.25);
  const double lower_edge = 1.0 - qq - eps;
  if (!(lower_edge > 0.0)) return kInfinity;
  const double c = (kE / (2.0 * kPi)) * (kE / (2.0 * kPi));
  const double far = c * dn * std::exp(-4.0 * std::sqrt(dn));
  const double near =
      c * (2.0 * std::pow(dn, 0.75) + 1.0) / (dn * (qq + eps) * lower_edge);
  return far + near;
}

ProbabilityBracket pn_sandwich(Count n, double q) {
  if (n < 2) throw std::invalid_argument("pn_sandwich requires n >= 2");
  require_open_unit(q, "pn_sandwich");
  const double g = pn_remainder(n, q);
  const double dn2 = 2.0 * static_cast<double>(n);
  const double edges = std::pow(q, dn2) + std::pow(1.0 - q, dn2);
  const double upper = 0.5 + 1.5 * (edges + g);
  return {0.5, std::isfinite(upper) ? std::min(1.0, upper) : 1.0};
}

ProbabilityBracket pmf_stirling_bounds(Count m, double p, Count k) {
  if (k < 1 || k > m - 1) throw std::invalid_argument("Stirling bracket needs 1 <= k <= m-1");
  require_open_unit(p, "Stirling bracket");
  const double dm = static_cast<double>(m);
  const double dk = static_cast<double>(k);
  const double shape = std::sqrt(dm / (dk * (dm - dk))) * std::exp(-dm * kl_bernoulli(dk / dm, p));
  return {std::sqrt(2.0 * kPi) / (kE * kE) * shape, kE / (2.0 * kPi) * shape};
}

BoundReport prop1_report(Count n, Count A, double q) {
  return {BoundName::prop1, {n, A, q}, prop1_error_bound(n, A, q), {}, {}, {}};
}

BoundReport prop4_report(Count n, Count B) {
  return {BoundName::prop4, {n, B, std::nullopt}, prop4_bound(n, B), {}, {}, {}};
}

BoundReport prop5_report(Count n, Count C, double q) {
  return {BoundName::prop5, {n, C, q}, prop5_bound(n, C, q), {}, {}, {}};
}

BoundReport pn_sandwich_report(Count n, double q) {
  const ProbabilityBracket b = pn_sandwich(n, q);
  BoundReport r{BoundName::pn_sandwich, {n, 0, q}, b.upper, b.lower, {}, {}};
  r.attach(keep_zero_probability(n, n, q));
  return r;
}

BoundReport stirling_report(Count m, double p, Count k) {
  const ProbabilityBracket b = pmf_stirling_bounds(m, p, k);
  BoundReport r{BoundName::stirling_bracket, {m, k, p}, b.upper, b.lower, {}, {}};
  r.attach(binomial_log_pmf(m, p, k).probability());
  return r;
}

BoundReport theorem2_envelope_report(Count n, double q) {
  return {BoundName::theorem2_envelope, {n, 0, q}, theorem2_envelope(n, q), {}, {}, {}};
}

}  // namespace smp
