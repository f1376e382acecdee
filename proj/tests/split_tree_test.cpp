#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "treepat/split_tree.hpp"

using namespace treepat;

namespace {

void expectBagInvariants(const SplitTree& t) {
  const auto& p = t.params();
  std::size_t total = 0;
  std::vector<std::size_t> subtreeBalls(t.tree().size(), 0);
  for (NodeId v = 0; v < t.tree().size(); ++v) {
    const auto& bag = t.bag(v);
    total += bag.size();
    if (t.tree().isLeaf(v)) {
      EXPECT_GE(bag.size(), 1u);
      EXPECT_LE(bag.size(), p.s);
    } else {
      EXPECT_EQ(bag.size(), p.s0);
    }
    EXPECT_LE(t.tree().children(v).size(), p.b);
  }
  EXPECT_EQ(total, t.ballCount());
  for (BallId j = 1; j <= t.ballCount(); ++j) {
    NodeId v = t.nodeOf(j);
    EXPECT_NE(std::find(t.bag(v).begin(), t.bag(v).end(), j), t.bag(v).end());
  }
}

SplitParams bucketParams() {
  SplitParams p;
  p.b = 3;
  p.s = 4;
  p.s0 = 2;
  p.s1 = 1;
  p.distribution = SplitDistribution::dirichlet(1.5, 3);
  return p;
}

}  // namespace

TEST(SplitParams, Validation) {
  SplitParams::bstPreset().validate();
  SplitParams p = SplitParams::bstPreset();
  p.s0 = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = bucketParams();
  p.s1 = 2;  // 3*2 > 4+1-2
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SplitParams::bstPreset();
  p.b = 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(SplitDistribution::fixed({Rational(1, 2), Rational(1, 3)}), std::invalid_argument);
  p = SplitParams::bstPreset();
  p.distribution = SplitDistribution::fixed({Rational(1), Rational(0)});
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(generateTrickleDown(SplitParams::bstPreset(), 0, 1), std::invalid_argument);
}

TEST(TrickleDown, SingleBall) {
  auto t = generateTrickleDown(SplitParams::bstPreset(), 1, 42);
  EXPECT_EQ(t.tree().size(), 1u);
  EXPECT_EQ(t.bag(0), std::vector<BallId>{1});
}

TEST(TrickleDown, BstIsBinarySearchShape) {
  // Every BST node holds one ball, so node count equals ball count.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = generateTrickleDown(SplitParams::bstPreset(), 200, seed);
    EXPECT_EQ(t.tree().size(), 200u);
    expectBagInvariants(t);
    EXPECT_EQ(t.bag(t.tree().root()).size(), 1u);
  }
}

TEST(TrickleDown, Deterministic) {
  auto a = generateTrickleDown(bucketParams(), 500, 9);
  auto b = generateTrickleDown(bucketParams(), 500, 9);
  EXPECT_TRUE(a.tree() == b.tree());
  EXPECT_EQ(a.bags(), b.bags());
  auto c = generateTrickleDown(bucketParams(), 500, 10);
  EXPECT_FALSE(a.tree() == c.tree() && a.bags() == c.bags());
}

TEST(TrickleDown, BucketInvariants) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) expectBagInvariants(generateTrickleDown(bucketParams(), 300, seed));
  SplitParams fixed;
  fixed.b = 2;
  fixed.s = 3;
  fixed.s0 = 1;
  fixed.distribution = SplitDistribution::fixed({Rational(1, 4), Rational(3, 4)});
  for (std::uint64_t seed = 0; seed < 30; ++seed) expectBagInvariants(generateTrickleDown(fixed, 257, seed));
}

TEST(Multinomial, BaseCaseAndInvariants) {
  auto leaf = generateMultinomial(bucketParams(), 4, 1);
  EXPECT_EQ(leaf.tree().size(), 1u);
  EXPECT_EQ(leaf.bag(0).size(), 4u);
  auto three = generateMultinomial(SplitParams::bstPreset(), 3, 7);
  EXPECT_EQ(three.tree().size(), 3u);
  EXPECT_EQ(three.bag(0).size(), 1u);
  std::size_t below = 0;
  for (NodeId c : three.tree().children(0)) below += three.tree().subtreeSize(c);
  EXPECT_EQ(below, 2u);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    expectBagInvariants(generateMultinomial(bucketParams(), 300, seed));
    expectBagInvariants(generateMultinomial(SplitParams::bstPreset(), 100, seed));
  }
}

TEST(BallOrder, Queries) {
  auto t = generateTrickleDown(bucketParams(), 200, 3);
  for (BallId j = 1; j <= t.ballCount(); ++j) {
    NodeId v = t.nodeOf(j);
    EXPECT_EQ(ballAncestorCount(t, j), t.tree().depth(v) + 1);
    for (BallId other : t.bag(v)) {
      EXPECT_FALSE(t.ballLess(j, other));
      if (other != j) EXPECT_TRUE(t.incomparable(j, other));
      std::vector<BallId> pair{j, other};
      EXPECT_EQ(ballCommonAncestors(t, pair), t.tree().depth(v) + 1);
    }
  }
  for (BallId j : t.bag(t.tree().root())) EXPECT_EQ(ballAncestorCount(t, j), 1u);
  EXPECT_THROW(ballAncestorCount(t, 0), std::invalid_argument);
  EXPECT_THROW(ballAncestorCount(t, 201), std::invalid_argument);
  std::vector<BallId> some{5, 17, 80};
  std::vector<NodeId> nodes{t.nodeOf(5), t.nodeOf(17), t.nodeOf(80)};
  EXPECT_EQ(ballCommonAncestors(t, some), t.tree().commonAncestors(nodes).commonAncestorCount);
}

TEST(SameChild, ClosedForms) {
  auto bst = sameChildProbabilityBound(SplitParams::bstPreset());
  ASSERT_TRUE(bst.exact);
  EXPECT_EQ(*bst.exact, Rational(2, 3));
  SplitParams uniform;
  uniform.b = 4;
  uniform.distribution = SplitDistribution::fixed(std::vector<Rational>(4, Rational(1, 4)));
  EXPECT_EQ(*sameChildProbabilityBound(uniform).exact, Rational(1, 4));
  auto dir = sameChildProbabilityBound(bucketParams());
  EXPECT_NEAR(dir.value, 2.5 / 5.5, 1e-12);
  for (const auto& p : {SplitParams::bstPreset(), bucketParams(), uniform})
    EXPECT_GE(sameChildProbabilityBound(p).value, 1.0 / p.b - 1e-15);
}

TEST(SameChild, MonteCarloAgreesWithClosedForm) {
  for (const auto& p : {SplitParams::bstPreset(), bucketParams()}) {
    auto exact = sameChildProbabilityBound(p);
    auto mc = sameChildProbabilityMonteCarlo(p, 200000, 17);
    EXPECT_GT(mc.standardError, 0);
    EXPECT_NEAR(mc.value, exact.value, 4 * mc.standardError);
  }
}

TEST(SplitEntropy, BstMu) { EXPECT_NEAR(splitEntropyMu(SplitParams::bstPreset()), -0.5, 1e-12); }

TEST(SplitVectors, SumToOne) {
  SplitMix64 rng(4);
  std::vector<double> v(3);
  auto d = SplitDistribution::dirichlet(0.7, 3);
  for (int i = 0; i < 1000; ++i) {
    d.sample(rng, v);
    EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), 1.0, 1e-12);
    for (double x : v) EXPECT_GE(x, 0.0);
  }
}

TEST(SplitTree, HeightTailDecays) {
  // Fraction of BST trees with height > K ln n falls as K grows.
  const std::size_t n = 10000;
  const double ln = std::log(static_cast<double>(n));
  std::vector<std::uint32_t> heights;
  for (std::uint64_t seed = 0; seed < 40; ++seed)
    heights.push_back(generateTrickleDown(SplitParams::bstPreset(), n, seed).tree().height());
  double prev = 1.0;
  for (double K : {2.0, 3.0, 4.0, 5.0}) {
    double frac = 0;
    for (auto h : heights) frac += h > K * ln;
    frac /= heights.size();
    EXPECT_LE(frac, prev);
    prev = frac;
  }
  EXPECT_EQ(prev, 0.0);
}
