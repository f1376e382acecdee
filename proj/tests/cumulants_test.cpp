#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_trees.hpp"
#include "treepat/constants.hpp"
#include "treepat/cumulants.hpp"
#include "treepat/kstatistics.hpp"

using namespace treepat;
using treepat::testing::randomSmallTree;

TEST(KStatistics, SmallSample) {
  std::vector<Rational> xs{1, 2, 3};
  EXPECT_EQ(kStatistics(xs, 2)[1], Rational(1));
  EXPECT_EQ(kStatistics(xs, 3)[2], Rational(0));
  EXPECT_THROW(kStatistics(xs, 4), std::invalid_argument);
}

TEST(KStatistics, InheritedUnderSubsampling) {
  // Averaging k_j over every size-4 subsample of a population of 6 gives
  // the population's own k_j, exactly.
  const std::vector<Rational> pop{Rational(3), Rational(-1), Rational(7, 2), Rational(0), Rational(5), Rational(11)};
  const auto whole = kStatistics(pop, 4);
  std::vector<Rational> avg(4, Rational(0));
  int subsets = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    std::vector<Rational> sub;
    for (unsigned i = 0; i < 6; ++i)
      if (mask >> i & 1) sub.push_back(pop[i]);
    const auto k = kStatistics(sub, 4);
    for (unsigned j = 0; j < 4; ++j) avg[j] += k[j];
    ++subsets;
  }
  ASSERT_EQ(subsets, 15);
  for (unsigned j = 0; j < 4; ++j) EXPECT_EQ(avg[j] / 15, whole[j]) << "k" << j + 1;
}

TEST(KStatistics, PlugInCumulantsOfKnownSample) {
  // Two-point sample {0, 1} repeated: Bernoulli(1/2) cumulants exactly.
  std::vector<Rational> xs;
  for (int i = 0; i < 10; ++i) xs.push_back(i % 2);
  const auto c = sampleCumulants(xs, 6);
  const std::vector<Rational> expected{Rational(1, 2), Rational(1, 4), 0, Rational(-1, 8), 0, Rational(1, 4)};
  for (unsigned j = 0; j < 6; ++j) EXPECT_EQ(c[j], expected[j]) << j + 1;
}

TEST(KStatistics, CompensatedDoubleMatchesExact) {
  std::vector<double> xs;
  std::vector<Rational> qs;
  for (int i = 0; i < 1000; ++i) {
    const long v = 1000000 + (i * 7919) % 1013;
    xs.push_back(static_cast<double>(v));
    qs.push_back(v);
  }
  const auto kd = kStatistics(xs, 4);
  const auto kq = kStatistics(qs, 4);
  for (unsigned j = 0; j < 4; ++j) EXPECT_NEAR(kd[j], toDouble(kq[j]), 1e-9 * std::abs(toDouble(kq[j])) + 1e-6);
}

TEST(ExactCumulants, PathOfTwo) {
  const auto k = exactCumulants(makePath(2), Pattern::parse("21"), 4);
  EXPECT_EQ(k[0], Rational(1, 2));
  EXPECT_EQ(k[1], Rational(1, 4));
  EXPECT_EQ(k[2], Rational(0));
  EXPECT_EQ(k[3], Rational(-1, 8));
}

TEST(ExactCumulants, MeanAndInversionCumulants) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto t = randomSmallTree(2, 8, seed);
    for (unsigned k = 2; k <= 3; ++k)
      for (const auto& alpha : allPatterns(k))
        EXPECT_EQ(exactCumulants(t, alpha, 1)[0], expectedOccurrences(t, alpha));
    const auto kap = exactCumulants(t, Pattern::parse("21"), 4);
    for (unsigned r = 2; r <= 4; ++r) EXPECT_EQ(kap[r - 1], inversionCumulantExact(t, r)) << seed << " r=" << r;
  }
}

TEST(EstimateCumulants, Guards) {
  const RootedTree t = makePath(3);
  SamplingOptions o;
  o.samples = 29;
  EXPECT_THROW(estimateCumulants(t, Pattern::parse("21"), 2, o), std::invalid_argument);
  o.samples = 100;
  EXPECT_THROW(estimateCumulants(t, Pattern::parse("21"), 7, o), std::invalid_argument);
}

TEST(EstimateCumulants, DegenerateSampleIsExactlyZero) {
  const RootedTree t = makePath(4);
  SamplingOptions o;
  o.samples = 200;
  const auto est = estimateCumulants(t, Pattern::parse("12345"), 6, o);
  for (const auto& e : est) {
    EXPECT_EQ(e.estimate, 0.0);
    EXPECT_EQ(e.standardError, 0.0);
  }
  EXPECT_EQ(est[3].estimator, CumulantEstimator::KStatistic);
  EXPECT_EQ(est[4].estimator, CumulantEstimator::SampleCumulant);
}

TEST(EstimateCumulants, DeterministicAndThreadIndependent) {
  const RootedTree t = makeCompleteBinaryTree(4);
  SamplingOptions o;
  o.samples = 500;
  o.seed = 77;
  const auto a = estimateCumulants(t, Pattern::parse("132"), 4, o);
  o.threads = 3;
  const auto b = estimateCumulants(t, Pattern::parse("132"), 4, o);
  for (unsigned j = 0; j < 4; ++j) {
    EXPECT_EQ(a[j].estimate, b[j].estimate);
    EXPECT_EQ(a[j].standardError, b[j].standardError);
  }
  o.seed = 78;
  EXPECT_NE(estimateCumulants(t, Pattern::parse("132"), 1, o)[0].estimate, a[0].estimate);
}

TEST(EstimateCumulants, SamplesMatchSampleLabelling) {
  const RootedTree t = makeCompleteBinaryTree(3);
  SamplingOptions o;
  o.samples = 40;
  o.seed = 5;
  const auto counts = sampleOccurrenceCounts(t, Pattern::parse("231"), o);
  for (std::size_t i = 0; i < counts.size(); ++i)
    EXPECT_EQ(counts[i], countOccurrences(t, Pattern::parse("231"), sampleLabelling(t.size(), deriveSeed(5, i))));
}

TEST(EstimateCumulants, ConvergesToExactWithinFourSE) {
  struct Case {
    RootedTree tree;
    Pattern alpha;
  };
  std::vector<Case> cases{{makePath(2), Pattern::parse("21")},
                          {randomSmallTree(7, 8, 3), Pattern::parse("21")},
                          {randomSmallTree(7, 8, 9), Pattern::parse("132")}};
  for (const auto& c : cases) {
    const auto exact = exactCumulants(c.tree, c.alpha, 3);
    int within[3] = {0, 0, 0};
    const int runs = 100;
    for (int run = 0; run < runs; ++run) {
      SamplingOptions o;
      o.samples = 10000;
      o.seed = 1000 + run;
      const auto est = estimateCumulants(c.tree, c.alpha, 3, o);
      for (unsigned j = 0; j < 3; ++j)
        if (std::abs(est[j].estimate - toDouble(exact[j])) <= 4 * est[j].standardError + 1e-12) ++within[j];
    }
    for (unsigned j = 0; j < 3; ++j) EXPECT_GE(within[j], 95) << c.alpha.str() << " r=" << j + 1;
  }
}

TEST(TheoremRatio, FirstOrderIsExactWithExactMean) {
  const RootedTree t = makeCompleteBinaryTree(5);
  for (unsigned k = 2; k <= 4; ++k) {
    const Pattern alpha = allPatterns(k).back();
    CumulantEstimate e;
    e.order = 1;
    e.estimate = toDouble(expectedOccurrences(t, alpha));
    const auto r = theoremRatio(t, alpha, 1, e);
    ASSERT_TRUE(r.ratio);
    EXPECT_EQ(*r.ratio, 1.0);
  }
}

TEST(TheoremRatio, ZeroConstantIsFlagged) {
  const RootedTree t = makeCompleteBinaryTree(4);
  CumulantEstimate e;
  e.order = 3;
  e.estimate = 12.5;
  const auto r = theoremRatio(t, Pattern::parse("21"), 3, e);
  EXPECT_TRUE(r.dIsZero);
  EXPECT_FALSE(r.ratio);
  EXPECT_DOUBLE_EQ(r.scaled, 12.5 / r.upsilon.get_d());
}

TEST(TheoremRatio, SecondOrderUsesConstantTimesUpsilon) {
  const RootedTree t = makeCompleteBinaryTree(3);
  CumulantEstimate e;
  e.order = 2;
  e.estimate = 45.0;
  e.standardError = 4.5;
  const auto r = theoremRatio(t, Pattern::parse("123"), 2, e);
  ASSERT_TRUE(r.ratio);
  EXPECT_EQ(r.d, Rational(1, 45));
  EXPECT_DOUBLE_EQ(*r.ratio, 45.0 * 45.0 / r.upsilon.get_d());
  EXPECT_DOUBLE_EQ(*r.ratioSE, *r.ratio / 10);
}
