#pragma once

// One-round transition probabilities of a single agent, and the shared
// memo cache that Monte Carlo sweeps read through.

#include <cstddef>

#include "smp/core.hpp"

namespace smp {

/// Zero-side transition pair at counts (z, o). The one-side pair follows by
/// relabeling: p_keep_one(z, o) = p_keep_zero(o, z).
struct TransitionProbabilities {
  double p_keep_zero = 0.0;   // a 0-holder still holds 0 after the round
  double p_adopt_zero = 0.0;  // a 1-holder switches to 0

  friend bool operator==(const TransitionProbabilities&, const TransitionProbabilities&) = default;
};

/// P{Bin(z-1, q') + 1 >= Bin(o, q')}; ties keep the own opinion.
double keep_zero_probability(Count z, Count o, double q);

/// P{Bin(z, q') >= Bin(o-1, q') + 2}; switching needs a strict majority.
double adopt_zero_probability(Count z, Count o, double q);

/// Both probabilities, read through the memo cache. A side with no agents
/// (z = 0 or o = 0) is reported as 0 and never evaluated.
TransitionProbabilities transition_probabilities(Count z, Count o, double q);

/// Cache capacity in entries; 0 disables memoization. Default 2^20.
void set_transition_cache_capacity(std::size_t entries);
std::size_t transition_cache_capacity();
std::size_t transition_cache_size();
void clear_transition_cache();

}  // namespace smp
