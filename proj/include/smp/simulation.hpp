#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smp/core.hpp"
#include "smp/rng.hpp"

namespace smp {

enum class SimulationPath {
  aggregated,  // two binomial draws per round from the exact transition probabilities
  per_agent,   // every receiver counts its own delivered messages
};

struct TrialOutcome {
  std::vector<OpinionCounts> trajectory;  // rounds 0..r
  bool consensus = false;
  bool majority_consensus = false;
  std::optional<Opinion> final_value;  // set when consensus holds

  const OpinionCounts& initial() const { return trajectory.front(); }
  const OpinionCounts& final_state() const { return trajectory.back(); }
  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// One round over explicit agents. Receiver i draws its delivered zeros and
/// ones from stream group i.
OpinionVector step_per_agent(const OpinionVector& state, double q, const RoundStreams& streams);

/// One round over counts: next zeros = Bin(z, p_keep) + Bin(o, p_adopt),
/// drawn from stream groups 0 and 1.
OpinionCounts step_aggregated(const OpinionCounts& counts, double q, const RoundStreams& streams);

/// Runs SMP(rounds) from make_initial_state(n, delta). Deterministic in
/// (master_seed, trial_index). Stops stepping once consensus is reached and
/// pads the trajectory with the absorbing state.
TrialOutcome run_trial(const ProtocolConfig& config, std::uint32_t trial_index,
                       std::uint64_t master_seed,
                       SimulationPath path = SimulationPath::aggregated);

}  // namespace smp
