#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "smp/oracle.hpp"
#include "smp/parallel.hpp"

using namespace smp;

namespace {

OpinionVector bits(std::initializer_list<int> v) {
  std::vector<Opinion> out;
  for (int b : v) out.push_back(b == 0 ? Opinion::zero : Opinion::one);
  return OpinionVector(out);
}

}  // namespace

TEST(Exhaustive, TwoAgentsTieNeverMoves) {
  for (double q : {0.0, 0.3, 1.0}) {
    const CountDistribution d = exhaustive_round_distribution(OpinionCounts{1, 1}, q);
    EXPECT_DOUBLE_EQ(d.at(1), 1.0);
  }
}

TEST(Exhaustive, UnanimousIsFixed) {
  const CountDistribution d = exhaustive_round_distribution(OpinionCounts{4, 0}, 0.5);
  EXPECT_DOUBLE_EQ(d.at(4), 1.0);
}

TEST(Exhaustive, PatternCountsSumToAllPatterns) {
  const LossPatternCounts c = exhaustive_pattern_counts(bits({0, 0, 1, 1}));
  EXPECT_EQ(c.links, 12);
  std::uint64_t total = 0;
  for (const auto& row : c.by_zeros_and_losses)
    for (std::uint64_t x : row) total += x;
  EXPECT_EQ(total, std::uint64_t{1} << 12);
}

TEST(Exhaustive, MatchesKernelRowUpToFourAgents) {
  for (Count total : {2, 4}) {
    for (Count z = 0; z <= total; ++z) {
      for (double q : {0.2, 0.5, 0.8}) {
        const CountDistribution a = exhaustive_round_distribution(OpinionCounts{z, total - z}, q);
        const CountDistribution b = transition_row({z, total - z}, q);
        for (Count k = 0; k <= total; ++k) EXPECT_NEAR(a.at(k), b.at(k), 1e-12) << z << ' ' << q << ' ' << k;
      }
    }
  }
}

TEST(Exhaustive, MatchesKernelRowSixAgents) {
  const LossPatternCounts counts = exhaustive_pattern_counts(OpinionVector::from_counts({4, 2}));
  for (double q : {0.2, 0.5, 0.8}) {
    const CountDistribution a = counts.distribution(q);
    const CountDistribution b = transition_row({4, 2}, q);
    for (Count k = 0; k <= 6; ++k) EXPECT_NEAR(a.at(k), b.at(k), 1e-12) << q << ' ' << k;
  }
}

TEST(Exhaustive, AgentOrderDoesNotMatter) {
  const std::vector<OpinionVector> orders = {bits({0, 0, 1, 1}), bits({0, 1, 0, 1}), bits({1, 1, 0, 0}),
                                             bits({1, 0, 0, 1})};
  const LossPatternCounts reference = exhaustive_pattern_counts(orders.front());
  for (const OpinionVector& v : orders) {
    EXPECT_EQ(exhaustive_pattern_counts(v).by_zeros_and_losses, reference.by_zeros_and_losses);
  }
}

TEST(Exhaustive, SerialEqualsParallel) {
  for (const OpinionVector& v : {bits({0, 0, 1, 1}), bits({0, 1, 1, 1}), bits({0, 1})}) {
    const LossPatternCounts s = serial::exhaustive_pattern_counts(v);
    for (int workers : {1, 2, 4}) {
      WorkerScope scope(workers);
      EXPECT_EQ(exhaustive_pattern_counts(v).by_zeros_and_losses, s.by_zeros_and_losses);
    }
  }
}

TEST(Exhaustive, TooLarge) {
  EXPECT_THROW(exhaustive_round_distribution(OpinionCounts{4, 4}, 0.5), UnsupportedSize);
  try {
    exhaustive_round_distribution(OpinionCounts{4, 4}, 0.5);
  } catch (const UnsupportedSize& e) {
    EXPECT_NE(std::string(e.what()).find('8'), std::string::npos);
  }
}

TEST(Distribution, Validation) {
  CountDistribution d{2, {0.25, 0.5, 0.25}};
  EXPECT_NO_THROW(d.validate());
  EXPECT_DOUBLE_EQ(d.mass(), 1.0);
  d.probabilities[0] = 0.5;
  EXPECT_THROW(d.validate(), std::invalid_argument);
  EXPECT_DOUBLE_EQ(total_variation({1, {1.0, 0.0}}, {1, {0.0, 1.0}}), 1.0);
}

TEST(Chain, TwoAgentsNeverAgree) {
  for (double q : {0.1, 0.5, 0.9}) {
    for (int r : {1, 3, 10}) {
      const ChainProbabilities p = exact_chain_consensus_probability(1, 0, q, r);
      EXPECT_EQ(p.p_consensus, 0.0);
      EXPECT_EQ(p.p_majority, 0.0);
    }
  }
}

TEST(Chain, OneRoundMatchesExhaustive) {
  const CountDistribution e = exhaustive_round_distribution(OpinionCounts{2, 2}, 0.5);
  const ChainProbabilities p = exact_chain_consensus_probability(2, 0, 0.5, 1);
  EXPECT_NEAR(p.p_consensus, e.at(0) + e.at(4), 1e-9);
  const CountDistribution e3 = exhaustive_round_distribution(OpinionCounts{3, 1}, 0.5);
  const ChainProbabilities p3 = exact_chain_consensus_probability(2, 1, 0.5, 1);
  EXPECT_NEAR(p3.p_majority, e3.at(4), 1e-9);
}

TEST(Chain, TwoRoundsMatchesExhaustiveComposition) {
  // Compose the brute-force one-round laws by hand.
  const double q = 0.4;
  std::vector<CountDistribution> rows;
  for (Count z = 0; z <= 4; ++z) rows.push_back(exhaustive_round_distribution(OpinionCounts{z, 4 - z}, q));
  std::vector<double> two(5, 0.0);
  for (Count z = 0; z <= 4; ++z)
    for (Count k = 0; k <= 4; ++k) two[static_cast<std::size_t>(k)] += rows[2].at(z) * rows[static_cast<std::size_t>(z)].at(k);
  CountChain chain(2, q);
  const CountDistribution d = chain.evolve({2, 2}, 2);
  for (Count k = 0; k <= 4; ++k) EXPECT_NEAR(d.at(k), two[static_cast<std::size_t>(k)], 1e-12);
}

TEST(Chain, MoreRoundsMoreConsensus) {
  const ChainProbabilities r2 = exact_chain_consensus_probability(50, 0, 0.5, 2);
  const ChainProbabilities r3 = exact_chain_consensus_probability(50, 0, 0.5, 3);
  EXPECT_GT(r3.p_consensus, r2.p_consensus);
}

TEST(Chain, DistributionsStayNormalized) {
  CountChain chain(200, 0.3);
  for (int r : {0, 1, 2, 5}) {
    const CountDistribution d = chain.evolve({210, 190}, r);
    EXPECT_NO_THROW(d.validate(1e-12));
  }
}

TEST(Chain, SerialEqualsParallel) {
  const CountDistribution s = serial::evolve_chain(120, 0.45, {125, 115}, 3);
  for (int workers : {1, 3}) {
    WorkerScope scope(workers);
    CountChain chain(120, 0.45);
    const CountDistribution p = chain.evolve({125, 115}, 3);
    ASSERT_EQ(p.probabilities.size(), s.probabilities.size());
    for (std::size_t k = 0; k < s.probabilities.size(); ++k)
      EXPECT_NEAR(p.probabilities[k], s.probabilities[k], 1e-14 + 1e-12 * s.probabilities[k]);
  }
}

TEST(Chain, SymmetricUnderRelabeling) {
  CountChain chain(60, 0.5);
  const CountDistribution a = chain.evolve({65, 55}, 2);
  const CountDistribution b = chain.evolve({55, 65}, 2);
  for (Count k = 0; k <= 120; ++k) EXPECT_NEAR(a.at(k), b.at(120 - k), 1e-13);
}

TEST(Chain, TooLarge) {
  EXPECT_THROW(CountChain(501, 0.5), UnsupportedSize);
  EXPECT_THROW(exact_chain_consensus_probability(600, 0, 0.5, 2), UnsupportedSize);
  EXPECT_NO_THROW(CountChain(500, 0.5));
}

TEST(Chain, Validation) {
  CountChain chain(5, 0.5);
  EXPECT_THROW(chain.evolve({4, 4}, 1), std::invalid_argument);
  EXPECT_THROW(chain.evolve({5, 5}, -1), std::invalid_argument);
  EXPECT_THROW(exact_chain_consensus_probability(5, 0, 0.5, 0), std::invalid_argument);
}
