#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "smp/core.hpp"
#include "smp/special.hpp"

using namespace smp;

namespace {

OpinionVector bits(std::initializer_list<int> v) {
  std::vector<Opinion> out;
  for (int b : v) out.push_back(b == 0 ? Opinion::zero : Opinion::one);
  return OpinionVector(out);
}

}  // namespace

TEST(MajorityUpdate, Examples) {
  EXPECT_EQ(majority_update(Opinion::zero, 2, 5), Opinion::one);
  EXPECT_EQ(majority_update(Opinion::one, 4, 4), Opinion::one);
  EXPECT_EQ(majority_update(Opinion::zero, 1, 0), Opinion::zero);
  EXPECT_EQ(majority_update(Opinion::zero, 3, 3), Opinion::zero);
  EXPECT_EQ(majority_update(Opinion::one, 5, 4), Opinion::zero);
}

TEST(MajorityUpdate, OwnOpinionMustBeCounted) {
  EXPECT_THROW(majority_update(Opinion::zero, 0, 3), std::invalid_argument);
  EXPECT_THROW(majority_update(Opinion::one, 3, 0), std::invalid_argument);
}

TEST(MajorityUpdate, RelabelingSymmetry) {
  for (Count n0 = 0; n0 <= 12; ++n0) {
    for (Count n1 = 0; n1 <= 12; ++n1) {
      for (Opinion own : {Opinion::zero, Opinion::one}) {
        if ((own == Opinion::zero && n0 < 1) || (own == Opinion::one && n1 < 1)) continue;
        EXPECT_EQ(majority_update(flip(own), n1, n0), flip(majority_update(own, n0, n1)));
      }
    }
  }
}

TEST(CountOpinions, Examples) {
  EXPECT_EQ(count_opinions(bits({0, 0, 1, 1}).bits(), Opinion::zero), 2);
  EXPECT_EQ(count_opinions(bits({1, 1, 1, 1}).bits(), Opinion::zero), 0);
  EXPECT_EQ(count_opinions(bits({0, 1, 0, 0, 1, 0}).bits(), Opinion::one), 2);
}

TEST(OpinionVector, Validation) {
  EXPECT_THROW(OpinionVector({}), std::invalid_argument);
  EXPECT_THROW(bits({0, 1, 1}), std::invalid_argument);
  const OpinionVector v = OpinionVector::from_counts({2, 4});
  EXPECT_EQ(v.size(), 6u);
  EXPECT_EQ(v.counts(), (OpinionCounts{2, 4}));
  EXPECT_EQ(v[0], Opinion::zero);
  EXPECT_EQ(v[5], Opinion::one);
}

TEST(Consensus, Predicates) {
  EXPECT_TRUE(is_consensus({4, 0}));
  EXPECT_FALSE(is_consensus({3, 1}));
  EXPECT_TRUE(is_consensus({0, 2}));

  EXPECT_TRUE(is_majority_consensus({3, 1}, {4, 0}));
  EXPECT_TRUE(is_majority_consensus({2, 2}, {0, 4}));
  EXPECT_TRUE(is_majority_consensus({2, 2}, {4, 0}));
  EXPECT_FALSE(is_majority_consensus({3, 1}, {0, 4}));
  EXPECT_FALSE(is_majority_consensus({3, 1}, {3, 1}));
  EXPECT_THROW(is_majority_consensus({3, 1}, {3, 3}), std::invalid_argument);
}

TEST(Consensus, MajorityImpliesConsensus) {
  for (Count z0 = 0; z0 <= 8; ++z0) {
    for (Count z1 = 0; z1 <= 8; ++z1) {
      const OpinionCounts i{z0, 8 - z0};
      const OpinionCounts f{z1, 8 - z1};
      if (is_majority_consensus(i, f)) EXPECT_TRUE(is_consensus(f));
    }
  }
}

TEST(InitialState, Examples) {
  EXPECT_EQ(make_initial_state(100, 0), (OpinionCounts{100, 100}));
  EXPECT_EQ(make_initial_state(100, 10), (OpinionCounts{110, 90}));
  EXPECT_EQ(make_initial_state(4, -4), (OpinionCounts{0, 8}));
  EXPECT_THROW(make_initial_state(4, 5), std::invalid_argument);
  EXPECT_THROW(make_initial_state(0, 0), std::invalid_argument);
}

TEST(Network, Validation) {
  EXPECT_THROW(NetworkModel(-0.1), std::invalid_argument);
  EXPECT_THROW(NetworkModel(1.5), std::invalid_argument);
  EXPECT_DOUBLE_EQ(NetworkModel(0.3).q_prime(), 0.7);
  EXPECT_TRUE(NetworkModel(0.0).degenerate());
  EXPECT_TRUE(NetworkModel(1.0).degenerate());
  EXPECT_FALSE(NetworkModel(0.5).degenerate());
}

TEST(ProtocolConfig, Validation) {
  ProtocolConfig c;
  c.n = 5;
  c.delta = 6;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.delta = -5;
  EXPECT_NO_THROW(c.validate());
  c.rounds = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(AsymmetryRegime, Sequences) {
  EXPECT_EQ(AsymmetryRegime::zero().asymmetry_at(1000), 0);
  EXPECT_EQ(AsymmetryRegime::sqrt_scaled(1.0).asymmetry_at(10000), 100);
  EXPECT_EQ(AsymmetryRegime::sqrt_scaled(1.0).asymmetry_at(101), 11);  // rounded up
  EXPECT_EQ(AsymmetryRegime::power(0.75).asymmetry_at(10000), 1000);
  EXPECT_EQ(AsymmetryRegime::logarithmic().asymmetry_at(1000), static_cast<Count>(std::ceil(std::log(1000.0))));
  EXPECT_EQ(AsymmetryRegime::custom({{10, 3}}).asymmetry_at(10), 3);
  EXPECT_THROW(AsymmetryRegime::custom({{10, 3}}).asymmetry_at(11), std::invalid_argument);
  EXPECT_THROW(AsymmetryRegime::sqrt_scaled(0.0), std::invalid_argument);
  EXPECT_THROW(AsymmetryRegime::power(1.0), std::invalid_argument);
}

TEST(AsymmetryRegime, PredictedLimits) {
  EXPECT_DOUBLE_EQ(*AsymmetryRegime::zero().predicted_limit(0.5), 0.5);
  EXPECT_DOUBLE_EQ(*AsymmetryRegime::logarithmic().predicted_limit(0.5), 0.5);
  EXPECT_NEAR(*AsymmetryRegime::sqrt_scaled(1.0).predicted_limit(0.5), 0.9213503964748575, 1e-12);
  EXPECT_DOUBLE_EQ(*AsymmetryRegime::power(0.75).predicted_limit(0.5), 1.0);
  EXPECT_FALSE(AsymmetryRegime::custom({{1, 0}}).predicted_limit(0.5).has_value());
}
