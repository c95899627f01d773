#pragma once

// Ground-truth computations for small systems: brute-force enumeration of
// every message-loss pattern, and the exact Markov chain on zero-counts.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "smp/core.hpp"

namespace smp {

/// Requested system is beyond what an exact oracle can enumerate.
class UnsupportedSize : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr Count kExhaustiveMaxAgents = 6;
inline constexpr Count kExactChainMaxAgents = 1000;

/// Law of the zero-count over support 0..total.
struct CountDistribution {
  Count total = 0;
  std::vector<double> probabilities;

  double at(Count zeros) const { return probabilities.at(static_cast<std::size_t>(zeros)); }
  double mass() const;
  void validate(double tolerance = 1e-10) const;

  friend bool operator==(const CountDistribution&, const CountDistribution&) = default;
};

double total_variation(const CountDistribution& a, const CountDistribution& b);

/// Number of loss patterns that lead to each (next zero count, number of
/// lost messages) pair. Independent of q, so one enumeration serves every
/// loss parameter.
struct LossPatternCounts {
  Count agents = 0;
  Count links = 0;  // agents * (agents - 1) directed messages per round
  std::vector<std::vector<std::uint64_t>> by_zeros_and_losses;

  CountDistribution distribution(double q) const;
};

/// Enumerates all 2^{2n(2n-1)} delivery patterns of one round, applying
/// majority_update at every receiver. 2n <= 6.
LossPatternCounts exhaustive_pattern_counts(const OpinionVector& state);

CountDistribution exhaustive_round_distribution(const OpinionVector& state, double q);
CountDistribution exhaustive_round_distribution(const OpinionCounts& counts, double q);

/// Kernel row of the count chain at `counts`: Bin(z, p_keep) * Bin(o, p_adopt).
CountDistribution transition_row(const OpinionCounts& counts, double q);

/// Exact count-chain propagation for a fixed (2n, q). Rows are built on
/// first use and reused across rounds and starting points.
class CountChain {
 public:
  CountChain(Count n, double q);

  Count n() const noexcept { return n_; }
  double q() const noexcept { return q_; }

  /// Law of the zero-count after `rounds` rounds from `initial`.
  CountDistribution evolve(const OpinionCounts& initial, int rounds);

  const std::vector<double>& row(Count zeros);

 private:
  Count n_;
  double q_;
  std::vector<std::vector<double>> rows_;
  std::vector<bool> built_;
};

struct ChainProbabilities {
  double p_consensus = 0.0;
  double p_majority = 0.0;
};

/// P{C_n} and P{C_n^m} for SMP(rounds) from make_initial_state(n, delta).
/// 2n <= 1000.
ChainProbabilities exact_chain_consensus_probability(Count n, Count delta, double q, int rounds);

ChainProbabilities consensus_probabilities(const CountDistribution& final_law, const OpinionCounts& initial);

namespace serial {

LossPatternCounts exhaustive_pattern_counts(const OpinionVector& state);

/// Single-threaded count-chain evolution, kept as the reference for the
/// OpenMP kernel.
CountDistribution evolve_chain(Count n, double q, const OpinionCounts& initial, int rounds);

}  // namespace serial

}  // namespace smp
