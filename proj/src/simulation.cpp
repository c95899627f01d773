#include "smp/simulation.hpp"

#include <stdexcept>

#include "smp/sampling.hpp"
#include "smp/transition.hpp"

namespace smp {

OpinionVector step_per_agent(const OpinionVector& state, double q, const RoundStreams& streams) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("loss parameter q must lie in [0,1]");
  const OpinionCounts counts = state.counts();
  const double delivery = 1.0 - q;
  std::vector<Opinion> next(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Opinion own = state[i];
    RngStream rng = streams.stream(static_cast<std::uint32_t>(i));
    const Count other_zeros = counts.zeros - (own == Opinion::zero ? 1 : 0);
    const Count other_ones = counts.ones - (own == Opinion::one ? 1 : 0);
    const Count heard_zeros = sample_binomial(other_zeros, delivery, rng);
    const Count heard_ones = sample_binomial(other_ones, delivery, rng);
    const Count n0 = heard_zeros + (own == Opinion::zero ? 1 : 0);
    const Count n1 = heard_ones + (own == Opinion::one ? 1 : 0);
    next[i] = majority_update(own, n0, n1);
  }
  return OpinionVector(std::move(next));
}

OpinionCounts step_aggregated(const OpinionCounts& counts, double q, const RoundStreams& streams) {
  require_valid(counts);
  const TransitionProbabilities t = transition_probabilities(counts.zeros, counts.ones, q);
  RngStream keep_rng = streams.stream(0);
  RngStream adopt_rng = streams.stream(1);
  const Count kept = counts.zeros > 0 ? sample_binomial(counts.zeros, t.p_keep_zero, keep_rng) : 0;
  const Count adopted = counts.ones > 0 ? sample_binomial(counts.ones, t.p_adopt_zero, adopt_rng) : 0;
  const Count zeros = kept + adopted;
  return {zeros, counts.total() - zeros};
}

TrialOutcome run_trial(const ProtocolConfig& config, std::uint32_t trial_index,
                       std::uint64_t master_seed, SimulationPath path) {
  config.validate();
  const double q = config.network.q();
  TrialOutcome out;
  out.trajectory.reserve(static_cast<std::size_t>(config.rounds) + 1);
  out.trajectory.push_back(config.initial_state());

  std::optional<OpinionVector> agents;
  if (path == SimulationPath::per_agent) agents = OpinionVector::from_counts(out.trajectory.front());

  for (int round = 1; round <= config.rounds; ++round) {
    const OpinionCounts& current = out.trajectory.back();
    if (is_consensus(current)) {
      out.trajectory.push_back(current);
      continue;
    }
    const RoundStreams streams{master_seed, trial_index, static_cast<std::uint32_t>(round)};
    if (path == SimulationPath::per_agent) {
      agents = step_per_agent(*agents, q, streams);
      out.trajectory.push_back(agents->counts());
    } else {
      out.trajectory.push_back(step_aggregated(current, q, streams));
    }
  }

  const OpinionCounts& last = out.trajectory.back();
  out.consensus = is_consensus(last);
  out.majority_consensus = is_majority_consensus(out.trajectory.front(), last);
  if (out.consensus) out.final_value = last.zeros > 0 ? Opinion::zero : Opinion::one;
  return out;
}

}  // namespace smp
