#pragma once

// The acceptance checks, shared by `smp verify` and the acceptance test
// binary. Each check is deterministic for a fixed seed.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "smp/core.hpp"
#include "smp/experiments.hpp"

namespace smp {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;

  friend bool operator==(const CriterionResult&, const CriterionResult&) = default;
};

struct VerificationReport {
  std::string suite;
  std::vector<CriterionResult> criteria;
  std::vector<SweepResult> sweeps;

  bool passed() const;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

inline constexpr int kCriterionCount = 11;

/// Produces the bytes of one result file at the given worker count.
using DeterminismProbe = std::function<std::string(int workers)>;

CriterionResult check_exhaustive_oracle(std::uint64_t seed);       // 1
CriterionResult check_union_bound(std::uint64_t seed);             // 2
CriterionResult check_trichotomy();                                // 3
CriterionResult check_fluctuation_law(std::uint64_t seed);         // 4
CriterionResult check_three_round_consensus(std::uint64_t seed);   // 5
CriterionResult check_two_round_decay(std::uint64_t seed);         // 6
CriterionResult check_deviation_tail(std::uint64_t seed);          // 7
CriterionResult check_consensus_bound();                           // 8
CriterionResult check_analytic_invariants();                       // 9
CriterionResult check_return_rate(std::uint64_t seed);             // 10
CriterionResult check_determinism(const DeterminismProbe& probe);  // 11

/// Runs criterion `id` (1..11). Criterion 11 needs a probe.
CriterionResult run_criterion(int id, std::uint64_t seed, const DeterminismProbe& probe = {});

/// One-round law of the zero count estimated from `trials` simulated rounds.
std::vector<double> empirical_round_law(const OpinionCounts& counts, double q, Count trials,
                                        std::uint64_t seed, SimulationPath path);

/// High-precision evaluation of the one-round union bound, independent of
/// the double-precision calculator.
double prop1_error_bound_reference(Count n, Count A, double q);

struct Theorem1Check {
  double q = 0.5;
  std::vector<Count> n_grid{100, 1000, 10000};
  Count trials = 2000;
  double alpha = 1.0;
};

/// theorem1_suite plus its pass/fail checks: bound domination on every
/// one-round row, and the two- and three-round rates at the largest n.
VerificationReport verify_theorem1(const Theorem1Check& check, std::uint64_t seed);

struct Theorem2Check {
  double q = 0.5;
  std::vector<Count> n_grid{100, 1000, 10000, 100000};
  Count trials = 10000;
  Count chain_n = 200;
};

VerificationReport verify_theorem2(const Theorem2Check& check, std::uint64_t seed);

/// Criteria `ids` in order, under the suite name `suite`.
VerificationReport verify_criteria(const std::string& suite, const std::vector<int>& ids,
                                   std::uint64_t seed, const DeterminismProbe& probe = {});

/// Criterion ids of the `properties` suite.
std::vector<int> property_criteria();

}  // namespace smp
