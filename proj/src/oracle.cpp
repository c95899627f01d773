#include "smp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <omp.h>

#include "smp/binomial.hpp"
#include "smp/summation.hpp"
#include "smp/transition.hpp"

namespace smp {

namespace {

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("loss parameter q must lie in [0,1]");
}

void check_exhaustive_size(Count agents) {
  if (agents > kExhaustiveMaxAgents) {
    throw UnsupportedSize("exhaustive enumeration supports at most " +
                          std::to_string(kExhaustiveMaxAgents) + " agents, got " +
                          std::to_string(agents));
  }
}

void check_chain_size(Count n) {
  if (2 * n > kExactChainMaxAgents) {
    throw UnsupportedSize("exact chain supports at most " + std::to_string(kExactChainMaxAgents) +
                          " agents, got " + std::to_string(2 * n));
  }
}

// Receiver i's view of one round: for every delivery mask over its
// agents-1 incoming links, its decision and how many messages were lost.
struct ReceiverTable {
  std::vector<std::uint8_t> decides_zero;
  std::vector<std::uint8_t> losses;
};

ReceiverTable receiver_table(const OpinionVector& state, std::size_t i) {
  const std::size_t agents = state.size();
  const std::size_t links = agents - 1;
  ReceiverTable t;
  const std::size_t patterns = std::size_t{1} << links;
  t.decides_zero.resize(patterns);
  t.losses.resize(patterns);
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    Count n0 = state[i] == Opinion::zero ? 1 : 0;
    Count n1 = 1 - n0;
    std::size_t bit = 0;
    for (std::size_t j = 0; j < agents; ++j) {
      if (j == i) continue;
      if ((mask >> bit) & 1u) (state[j] == Opinion::zero ? n0 : n1) += 1;
      ++bit;
    }
    t.decides_zero[mask] = majority_update(state[i], n0, n1) == Opinion::zero;
    t.losses[mask] = static_cast<std::uint8_t>(links - static_cast<std::size_t>(std::popcount(mask)));
  }
  return t;
}

using CountTable = std::vector<std::vector<std::uint64_t>>;

CountTable empty_table(Count agents, Count links) {
  return CountTable(static_cast<std::size_t>(agents + 1),
                    std::vector<std::uint64_t>(static_cast<std::size_t>(links + 1), 0));
}

void enumerate_from(const std::vector<ReceiverTable>& tables, std::size_t agent, std::size_t zeros,
                    std::size_t losses, CountTable& out) {
  const ReceiverTable& t = tables[agent];
  const std::size_t patterns = t.losses.size();
  if (agent + 1 == tables.size()) {
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      ++out[zeros + t.decides_zero[mask]][losses + t.losses[mask]];
    }
    return;
  }
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    enumerate_from(tables, agent + 1, zeros + t.decides_zero[mask], losses + t.losses[mask], out);
  }
}

// Convolution of two pmf vectors, skipping the zero ends.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  auto nonzero = [](const std::vector<double>& v) {
    std::size_t lo = 0, hi = v.size();
    while (lo < hi && v[lo] == 0.0) ++lo;
    while (hi > lo && v[hi - 1] == 0.0) --hi;
    return std::pair{lo, hi};
  };
  const auto [alo, ahi] = nonzero(a);
  const auto [blo, bhi] = nonzero(b);
  for (std::size_t i = alo; i < ahi; ++i) {
    const double ai = a[i];
    for (std::size_t j = blo; j < bhi; ++j) out[i + j] += ai * b[j];
  }
  return out;
}

std::vector<double> build_row(Count zeros, Count total, double q) {
  const Count ones = total - zeros;
  const TransitionProbabilities t = transition_probabilities(zeros, ones, q);
  return convolve(detail::binomial_pmf_vector(zeros, t.p_keep_zero),
                  detail::binomial_pmf_vector(ones, t.p_adopt_zero));
}

}  // namespace

double CountDistribution::mass() const {
  CompensatedSum s;
  for (double p : probabilities) s.add(p);
  return s.value();
}

void CountDistribution::validate(double tolerance) const {
  if (probabilities.size() != static_cast<std::size_t>(total + 1)) {
    throw std::invalid_argument("distribution support must be 0..total");
  }
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument("distribution has a negative entry");
  }
  if (std::fabs(mass() - 1.0) > tolerance) {
    throw std::invalid_argument("distribution does not sum to one");
  }
}

double total_variation(const CountDistribution& a, const CountDistribution& b) {
  if (a.total != b.total) throw std::invalid_argument("distributions have different supports");
  CompensatedSum s;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i) {
    s.add(std::fabs(a.probabilities[i] - b.probabilities[i]));
  }
  return 0.5 * s.value();
}

CountDistribution LossPatternCounts::distribution(double q) const {
  check_q(q);
  CountDistribution d{agents, std::vector<double>(static_cast<std::size_t>(agents + 1), 0.0)};
  for (std::size_t z = 0; z < by_zeros_and_losses.size(); ++z) {
    CompensatedSum s;
    for (std::size_t lost = 0; lost < by_zeros_and_losses[z].size(); ++lost) {
      const std::uint64_t count = by_zeros_and_losses[z][lost];
      if (count == 0) continue;
      const double weight = std::pow(q, static_cast<double>(lost)) *
                            std::pow(1.0 - q, static_cast<double>(links - static_cast<Count>(lost)));
      s.add(static_cast<double>(count) * weight);
    }
    d.probabilities[z] = s.value();
  }
  return d;
}

LossPatternCounts exhaustive_pattern_counts(const OpinionVector& state) {
  const auto agents = static_cast<Count>(state.size());
  check_exhaustive_size(agents);
  const Count links = agents * (agents - 1);
  std::vector<ReceiverTable> tables;
  for (std::size_t i = 0; i < state.size(); ++i) tables.push_back(receiver_table(state, i));

  CountTable total = empty_table(agents, links);
  const ReceiverTable& first = tables.front();
  const auto first_patterns = static_cast<std::int64_t>(first.losses.size());
#pragma omp parallel
  {
    CountTable local = empty_table(agents, links);
#pragma omp for schedule(dynamic)
    for (std::int64_t mask = 0; mask < first_patterns; ++mask) {
      const auto m = static_cast<std::size_t>(mask);
      if (tables.size() == 1) continue;
      enumerate_from(tables, 1, first.decides_zero[m], first.losses[m], local);
    }
#pragma omp critical
    for (std::size_t z = 0; z < total.size(); ++z) {
      for (std::size_t l = 0; l < total[z].size(); ++l) total[z][l] += local[z][l];
    }
  }
  return {agents, links, std::move(total)};
}

CountDistribution exhaustive_round_distribution(const OpinionVector& state, double q) {
  return exhaustive_pattern_counts(state).distribution(q);
}

CountDistribution exhaustive_round_distribution(const OpinionCounts& counts, double q) {
  require_valid(counts);
  check_exhaustive_size(counts.total());
  return exhaustive_round_distribution(OpinionVector::from_counts(counts), q);
}

CountDistribution transition_row(const OpinionCounts& counts, double q) {
  require_valid(counts);
  check_q(q);
  return {counts.total(), build_row(counts.zeros, counts.total(), q)};
}

CountChain::CountChain(Count n, double q) : n_(n), q_(q) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  check_q(q);
  check_chain_size(n);
  rows_.resize(static_cast<std::size_t>(2 * n + 1));
  built_.assign(rows_.size(), false);
}

const std::vector<double>& CountChain::row(Count zeros) {
  const auto z = static_cast<std::size_t>(zeros);
  if (!built_.at(z)) {
    rows_[z] = build_row(zeros, 2 * n_, q_);
    built_[z] = true;
  }
  return rows_[z];
}

CountDistribution CountChain::evolve(const OpinionCounts& initial, int rounds) {
  require_valid(initial);
  if (initial.total() != 2 * n_) throw std::invalid_argument("initial state does not match chain size");
  if (rounds < 0) throw std::invalid_argument("rounds must be nonnegative");
  const auto size = static_cast<std::size_t>(2 * n_ + 1);
  std::vector<double> dist(size, 0.0);
  dist[static_cast<std::size_t>(initial.zeros)] = 1.0;

  for (int r = 0; r < rounds; ++r) {
    std::vector<std::int64_t> missing;
    for (std::size_t z = 0; z < size; ++z) {
      if (dist[z] > 0.0 && !built_[z]) missing.push_back(static_cast<std::int64_t>(z));
    }
    const auto missing_count = static_cast<std::int64_t>(missing.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < missing_count; ++i) {
      const auto z = static_cast<std::size_t>(missing[static_cast<std::size_t>(i)]);
      rows_[z] = build_row(static_cast<Count>(z), 2 * n_, q_);
    }
    for (std::int64_t z : missing) built_[static_cast<std::size_t>(z)] = true;

    std::vector<double> next(size, 0.0);
    const auto jobs = static_cast<std::int64_t>(size);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < jobs; ++j) {
      CompensatedSum s;
      for (std::size_t z = 0; z < size; ++z) {
        if (dist[z] > 0.0) s.add(dist[z] * rows_[z][static_cast<std::size_t>(j)]);
      }
      next[static_cast<std::size_t>(j)] = s.value();
    }
    dist = std::move(next);
  }
  return {2 * n_, std::move(dist)};
}

ChainProbabilities consensus_probabilities(const CountDistribution& final_law, const OpinionCounts& initial) {
  const double all_ones = final_law.at(0);
  const double all_zeros = final_law.at(final_law.total);
  ChainProbabilities out;
  out.p_consensus = all_ones + all_zeros;
  if (initial.zeros > initial.ones) {
    out.p_majority = all_zeros;
  } else if (initial.ones > initial.zeros) {
    out.p_majority = all_ones;
  } else {
    out.p_majority = out.p_consensus;
  }
  return out;
}

ChainProbabilities exact_chain_consensus_probability(Count n, Count delta, double q, int rounds) {
  check_chain_size(n);
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  const OpinionCounts initial = make_initial_state(n, delta);
  CountChain chain(n, q);
  return consensus_probabilities(chain.evolve(initial, rounds), initial);
}

namespace serial {

LossPatternCounts exhaustive_pattern_counts(const OpinionVector& state) {
  const auto agents = static_cast<Count>(state.size());
  check_exhaustive_size(agents);
  const Count links = agents * (agents - 1);
  CountTable table = empty_table(agents, links);
  // Pattern bit (i * (agents-1) + slot) is the message from the slot-th
  // other agent to receiver i.
  const std::uint64_t patterns = std::uint64_t{1} << links;
  for (std::uint64_t pattern = 0; pattern < patterns; ++pattern) {
    Count zeros = 0;
    std::size_t bit = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      Count n0 = state[i] == Opinion::zero ? 1 : 0;
      Count n1 = 1 - n0;
      for (std::size_t j = 0; j < state.size(); ++j) {
        if (j == i) continue;
        if ((pattern >> bit) & 1u) (state[j] == Opinion::zero ? n0 : n1) += 1;
        ++bit;
      }
      if (majority_update(state[i], n0, n1) == Opinion::zero) ++zeros;
    }
    const auto lost = static_cast<std::size_t>(links - std::popcount(pattern));
    ++table[static_cast<std::size_t>(zeros)][lost];
  }
  return {agents, links, std::move(table)};
}

CountDistribution evolve_chain(Count n, double q, const OpinionCounts& initial, int rounds) {
  check_chain_size(n);
  require_valid(initial);
  const Count total = 2 * n;
  std::vector<double> dist(static_cast<std::size_t>(total + 1), 0.0);
  dist[static_cast<std::size_t>(initial.zeros)] = 1.0;
  for (int r = 0; r < rounds; ++r) {
    std::vector<CompensatedSum> next(dist.size());
    for (Count z = 0; z <= total; ++z) {
      const double w = dist[static_cast<std::size_t>(z)];
      if (w == 0.0) continue;
      const std::vector<double> row = build_row(z, total, q);
      for (std::size_t j = 0; j < row.size(); ++j) next[j].add(w * row[j]);
    }
    for (std::size_t j = 0; j < dist.size(); ++j) dist[j] = next[j].value();
  }
  return {total, std::move(dist)};
}

}  // namespace serial

}  // namespace smp
