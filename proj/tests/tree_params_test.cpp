#include <gtest/gtest.h>

#include "test_trees.hpp"
#include "treepat/errors.hpp"
#include "treepat/split_tree.hpp"
#include "treepat/tree_params.hpp"

using namespace treepat;
using treepat::testing::randomCaterpillar;
using treepat::testing::randomSmallTree;

TEST(Upsilon, Examples) {
  EXPECT_EQ(upsilon(makePath(2), {2, 2, TupleMode::WithRepetition}), 5);
  EXPECT_EQ(upsilon(makeCompleteBinaryTree(2), {1, 2, TupleMode::WithRepetition}), 17);
  EXPECT_THROW(upsilon(makePath(2), {2, 1, TupleMode::WithRepetition}), std::invalid_argument);
  EXPECT_THROW(upsilon(makePath(2), {0, 2, TupleMode::WithRepetition}), std::invalid_argument);
}

TEST(Upsilon, TotalPathLengthIdentity) {
  EXPECT_EQ(totalPathLength(makePath(1)), 0);
  EXPECT_EQ(totalPathLength(makePath(3)), 3);
  EXPECT_EQ(totalPathLength(makeCompleteBinaryTree(2)), 10);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto t = randomSmallTree(1, 300, seed);
    EXPECT_EQ(upsilon(t, {1, 2, TupleMode::WithRepetition}) - static_cast<unsigned long>(t.size()),
              totalPathLength(t));
  }
}

TEST(Upsilon, FastPathMatchesNaive) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto t = seed % 2 ? randomSmallTree(1, 200, seed) : randomCaterpillar(1 + seed * 8, seed);
    const unsigned maxR = t.size() <= 40 ? 4 : 2;
    for (unsigned r = 1; r <= maxR; ++r)
      for (unsigned k = 2; k <= 4; ++k)
        for (auto mode : {TupleMode::WithRepetition, TupleMode::Distinct}) {
          UpsilonSpec spec{r, k, mode};
          ASSERT_EQ(upsilon(t, spec), upsilonNaive(t, spec)) << "seed " << seed << " r " << r << " k " << k;
        }
  }
}

TEST(Upsilon, SplitTreeFastPathMatchesNaive) {
  SplitParams p;
  p.s = 3;
  p.s0 = 2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto t = generateTrickleDown(p, 60, seed);
    for (unsigned r = 1; r <= 3; ++r)
      for (auto mode : {TupleMode::WithRepetition, TupleMode::Distinct}) {
        UpsilonSpec spec{r, 3, mode};
        ASSERT_EQ(upsilon(t, spec), upsilonNaive(t, spec));
      }
  }
}

TEST(Upsilon, NaiveGuard) {
  EXPECT_THROW(upsilonNaive(makeCompleteBinaryTree(10), {3, 2, TupleMode::Distinct}), InfeasibleError);
}

TEST(Upsilon, MonotoneUnderLeafAddition) {
  SplitMix64 rng(77);
  std::vector<NodeId> parents{kNoNode};
  BigInt prevRep = 0, prevDist = 0;
  for (int step = 0; step < 60; ++step) {
    auto t = RootedTree::fromParents(parents);
    BigInt rep = upsilon(t, {3, 3, TupleMode::WithRepetition});
    BigInt dist = upsilon(t, {3, 3, TupleMode::Distinct});
    EXPECT_GE(rep, prevRep);
    EXPECT_GE(dist, prevDist);
    prevRep = rep;
    prevDist = dist;
    parents.push_back(static_cast<NodeId>(rng.below(parents.size())));
  }
}

TEST(AncestorTail, Examples) {
  auto t = makeCompleteBinaryTree(2);
  EXPECT_EQ(ancestorTail(t, 1), 42);
  EXPECT_EQ(ancestorTail(t, 2), 12);
  EXPECT_EQ(ancestorTail(t, 4), 0);
  EXPECT_THROW(ancestorTail(t, 0), std::invalid_argument);
}

TEST(AncestorTail, MatchesNaiveAndIsMonotone) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = randomSmallTree(1, 120, seed);
    BigInt prev = ancestorTail(t, 1);
    EXPECT_EQ(prev, BigInt(static_cast<unsigned long>(t.size() * (t.size() - 1))));
    for (std::uint32_t ell = 1; ell <= t.height() + 3; ++ell) {
      BigInt cur = ancestorTail(t, ell);
      EXPECT_EQ(cur, ancestorTailNaive(t, ell));
      EXPECT_LE(cur, prev);
      if (ell > t.height() + 1) EXPECT_EQ(cur, 0);
      prev = cur;
    }
  }
}
