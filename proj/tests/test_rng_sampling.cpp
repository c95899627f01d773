#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "smp/binomial.hpp"
#include "smp/rng.hpp"
#include "smp/sampling.hpp"

using namespace smp;

TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, SamePathSameDraws) {
  RngStream a(7, {3, 1, 2});
  RngStream b(7, {3, 1, 2});
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctPathsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint32_t t = 0; t < 20; ++t)
    for (std::uint32_t r = 0; r < 5; ++r)
      for (std::uint32_t g = 0; g < 5; ++g) firsts.insert(RngStream(7, {t, r, g}).next_u64());
  EXPECT_EQ(firsts.size(), 500u);
  EXPECT_NE(RngStream(7, {0, 0, 0}).next_u64(), RngStream(8, {0, 0, 0}).next_u64());
}

TEST(RngStream, UniformRange) {
  RngStream s(1, {});
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(DeriveSeed, SpreadsLabels) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t l = 0; l < 1000; ++l) seeds.insert(derive_seed(42, l));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_EQ(derive_seed(42, 5), derive_seed(42, 5));
}

TEST(SampleBinomial, EdgeCases) {
  RngStream s(3, {});
  EXPECT_EQ(sample_binomial(0, 0.4, s), 0);
  EXPECT_EQ(sample_binomial(50, 0.0, s), 0);
  EXPECT_EQ(sample_binomial(50, 1.0, s), 50);
  for (int i = 0; i < 1000; ++i) {
    const Count k = sample_binomial(1000000, 0.5, s);
    ASSERT_GE(k, 0);
    ASSERT_LE(k, 1000000);
  }
}

TEST(SampleBinomial, Mean) {
  RngStream s(11, {});
  double sum = 0.0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) sum += static_cast<double>(sample_binomial(100, 0.3, s));
  EXPECT_NEAR(sum / draws, 30.0, 0.1);
}

namespace {

// Pearson chi-square against the exact pmf, pooling tail cells until each
// has expected count at least 5.
double chi_square_p_value(Count m, double p, int draws, std::uint64_t seed) {
  std::vector<double> observed(static_cast<std::size_t>(m + 1), 0.0);
  RngStream s(seed, {});
  for (int i = 0; i < draws; ++i) observed[static_cast<std::size_t>(sample_binomial(m, p, s))] += 1.0;

  std::vector<double> obs_cells, exp_cells;
  double o_acc = 0.0, e_acc = 0.0;
  for (Count k = 0; k <= m; ++k) {
    o_acc += observed[static_cast<std::size_t>(k)];
    e_acc += draws * binomial_log_pmf(m, p, k).probability();
    if (e_acc >= 5.0) {
      obs_cells.push_back(o_acc);
      exp_cells.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (!exp_cells.empty()) {
    obs_cells.back() += o_acc;
    exp_cells.back() += e_acc;
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < obs_cells.size(); ++i) {
    const double d = obs_cells[i] - exp_cells[i];
    stat += d * d / exp_cells[i];
  }
  const boost::math::chi_squared dist(static_cast<double>(obs_cells.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST(SampleBinomial, ChiSquareInversion) {
  EXPECT_GT(chi_square_p_value(10, 0.5, 200000, 21), 0.001);
  EXPECT_GT(chi_square_p_value(100, 0.3, 200000, 22), 0.001);
  EXPECT_GT(chi_square_p_value(2000, 0.9, 200000, 23), 0.001);
}

TEST(SampleBinomial, ChiSquareRejection) {
  // m > 1024 and mean >= 10 go through BTRS.
  EXPECT_GT(chi_square_p_value(5000, 0.3, 200000, 24), 0.001);
  EXPECT_GT(chi_square_p_value(100000, 0.5, 200000, 25), 0.001);
  EXPECT_GT(chi_square_p_value(3000, 0.01, 200000, 26), 0.001);
}

TEST(SampleBinomial, BothBranchesAgreeInLaw) {
  // Same parameters, both methods directly: means and variances should match.
  RngStream a(31, {});
  RngStream b(32, {});
  const Count m = 4000;
  const double p = 0.2;
  const int draws = 200000;
  double sa = 0, sb = 0, qa = 0, qb = 0;
  for (int i = 0; i < draws; ++i) {
    const double x = static_cast<double>(detail::sample_binomial_inversion(m, p, a));
    const double y = static_cast<double>(detail::sample_binomial_btrs(m, p, b));
    sa += x;
    sb += y;
    qa += x * x;
    qb += y * y;
  }
  const double mean = m * p;
  const double var = m * p * (1 - p);
  const double se = std::sqrt(var / draws);
  EXPECT_NEAR(sa / draws, mean, 5 * se);
  EXPECT_NEAR(sb / draws, mean, 5 * se);
  EXPECT_NEAR(qa / draws - (sa / draws) * (sa / draws), var, 0.02 * var);
  EXPECT_NEAR(qb / draws - (sb / draws) * (sb / draws), var, 0.02 * var);
}
