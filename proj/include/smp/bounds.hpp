#pragma once

// Closed-form bounds and limit constants for the one-round dynamics.

#include <optional>
#include <string>

#include "smp/core.hpp"

namespace smp {

enum class BoundName { prop1, prop4, prop5, pn_sandwich, stirling_bracket, theorem2_envelope };

std::string to_string(BoundName name);
BoundName bound_name_from_string(const std::string& s);

struct BoundParameters {
  Count n = 0;
  Count asymmetry = 0;
  std::optional<double> q;

  friend bool operator==(const BoundParameters&, const BoundParameters&) = default;
};

/// A bound evaluated at one point, optionally paired with the quantity it
/// controls. For brackets, lower_value is set as well.
struct BoundReport {
  BoundName bound_name = BoundName::prop1;
  BoundParameters parameters;
  double bound_value = 0.0;
  std::optional<double> lower_value;
  std::optional<double> empirical_value;
  std::optional<bool> satisfied;

  /// Sets empirical_value and recomputes satisfied.
  void attach(double empirical);

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// Union-bound estimate of the majority-consensus error of one round from
/// n + A zeros: 2n sqrt((n+A)/(n-A)) exp(-(1-q) A^2 / n). Requires 0 <= A < n
/// and q in [0,1); callers clamp A to n-1 near the unanimous end.
double prop1_error_bound(Count n, Count A, double q);

/// 2 exp(-B^2 / n): tail of |N(X_1;0) - n| from a symmetric start.
double prop4_bound(Count n, Count B);

/// 32 / min(q, 1-q).
double f_q(double q);

/// Envelope exponent C(q) = 1 / (2 f_q).
double theorem2_exponent(double q);

/// 3 / n^{C(q)}: envelope of the two-round consensus probability from a
/// symmetric start.
double theorem2_envelope(Count n, double q);

/// exp(-C^2 exp(-f_q C^2 / (n - C))): one-round consensus probability from
/// n + C zeros. Requires 0 <= C < n and q in (0,1).
double prop5_bound(Count n, Count C, double q);

struct ProbabilityBracket {
  double lower = 0.0;
  double upper = 1.0;
};

/// The G_n remainder of the symmetric keep-probability bracket. Uses the
/// q <-> 1-q symmetry so that q >= 1/2 before evaluating. Returns +inf when
/// the bracket's interval reaches below zero (small n), where it is vacuous.
double pn_remainder(Count n, double q);

/// [1/2, min(1, 1/2 + 3/2 (q^{2n} + G_n + (1-q)^{2n}))] around
/// keep_zero_probability(n, n, q). Requires n >= 2 and q in (0,1).
ProbabilityBracket pn_sandwich(Count n, double q);

/// Stirling bracket around the binomial point mass for interior k:
/// c * sqrt(m / (k (m-k))) * exp(-m D(k/m || p)) with c = sqrt(2 pi)/e^2
/// (lower) and e/(2 pi) (upper).
ProbabilityBracket pmf_stirling_bounds(Count m, double p, Count k);

BoundReport prop1_report(Count n, Count A, double q);
BoundReport prop4_report(Count n, Count B);
BoundReport prop5_report(Count n, Count C, double q);
BoundReport pn_sandwich_report(Count n, double q);  // empirical = exact p_n
BoundReport stirling_report(Count m, double p, Count k);  // empirical = exact pmf
BoundReport theorem2_envelope_report(Count n, double q);

}  // namespace smp
