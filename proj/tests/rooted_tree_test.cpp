#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "treepat/errors.hpp"
#include "treepat/random.hpp"
#include "treepat/rooted_tree.hpp"
#include "treepat/tree_params.hpp"

using namespace treepat;

TEST(CompleteBinary, Sizes) {
  EXPECT_EQ(makeCompleteBinaryTree(0).size(), 1u);
  for (unsigned m = 0; m <= 10; ++m) {
    auto t = makeCompleteBinaryTree(m);
    EXPECT_EQ(t.size(), (1u << (m + 1)) - 1);
    EXPECT_EQ(t.height(), m);
    for (NodeId v = 0; v < t.size(); ++v) {
      if (t.isLeaf(v)) EXPECT_EQ(t.depth(v), m);
      else EXPECT_EQ(t.children(v).size(), 2u);
    }
  }
  EXPECT_THROW(makeCompleteBinaryTree(40), InfeasibleError);
}

TEST(CompleteBinary, HeightTwoDepths) {
  auto t = makeCompleteBinaryTree(2);
  std::multiset<std::uint32_t> depths;
  for (NodeId v = 0; v < t.size(); ++v) depths.insert(t.depth(v));
  EXPECT_EQ(depths, (std::multiset<std::uint32_t>{0, 1, 1, 2, 2, 2, 2}));
}

TEST(Path, Basics) {
  EXPECT_THROW(makePath(0), std::invalid_argument);
  auto p = makePath(3);
  EXPECT_EQ(p.depth(0), 0u);
  EXPECT_EQ(p.depth(2), 2u);
  EXPECT_EQ(makePath(1).size(), 1u);
}

TEST(Ancestry, Strict) {
  auto t = makeCompleteBinaryTree(1);
  EXPECT_TRUE(t.isAncestor(0, 1));
  EXPECT_FALSE(t.isAncestor(1, 1));
  EXPECT_FALSE(t.isAncestor(1, 2));
  EXPECT_THROW(t.isAncestor(0, 9), std::invalid_argument);
}

TEST(Ancestry, CommonAncestors) {
  auto t = makeCompleteBinaryTree(1);
  std::vector<NodeId> root{0}, leaves{1, 2};
  EXPECT_EQ(t.commonAncestors(root).commonAncestorCount, 1u);
  EXPECT_EQ(t.commonAncestors(leaves).commonAncestorCount, 1u);
  EXPECT_THROW(t.commonAncestors(std::vector<NodeId>{}), std::invalid_argument);
  auto big = makeRandomRecursiveTree(60, 3);
  for (NodeId v = 0; v < big.size(); ++v) {
    std::vector<NodeId> one{v};
    EXPECT_EQ(big.commonAncestors(one).commonAncestorCount, big.depth(v) + 1);
  }
}

TEST(Ancestry, PermutationAndDuplicationInvariant) {
  auto t = makeRandomRecursiveTree(80, 11);
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<NodeId> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(static_cast<NodeId>(rng.below(t.size())));
    auto base = t.commonAncestors(vs);
    auto shuffled = vs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.push_back(vs[0]);
    auto other = t.commonAncestors(shuffled);
    EXPECT_EQ(base.lca, other.lca);
    EXPECT_EQ(base.commonAncestorCount, t.depth(base.lca) + 1);
  }
}

namespace {
std::set<NodeId> ancestorSet(const RootedTree& t, NodeId v) {
  std::set<NodeId> out{v};
  while (auto p = t.parent(v)) out.insert(v = *p);
  return out;
}
}  // namespace

TEST(Ancestry, LcaMatchesSetIntersection) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto t = makeRandomRecursiveTree(1 + seed * 20, seed);
    SplitMix64 rng(seed);
    for (int trial = 0; trial < 100; ++trial) {
      NodeId a = static_cast<NodeId>(rng.below(t.size())), b = static_cast<NodeId>(rng.below(t.size()));
      auto sa = ancestorSet(t, a), sb = ancestorSet(t, b);
      std::vector<NodeId> common;
      std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
      NodeId deepest = *std::max_element(common.begin(), common.end(),
                                         [&](NodeId x, NodeId y) { return t.depth(x) < t.depth(y); });
      EXPECT_EQ(t.lca(a, b), deepest);
      std::vector<NodeId> pair{a, b};
      EXPECT_EQ(t.commonAncestors(pair).commonAncestorCount, common.size());
    }
  }
}

TEST(FromParents, Validation) {
  EXPECT_EQ(RootedTree::fromParents({kNoNode}).size(), 1u);
  try {
    RootedTree::fromParents({kNoNode, kNoNode});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("multiple roots"), std::string::npos);
  }
  EXPECT_THROW(RootedTree::fromParents({1, 0}), ParseError);
  EXPECT_THROW(RootedTree::fromParents({kNoNode, 2, 1}), ParseError);
  EXPECT_THROW(RootedTree::fromParents({kNoNode, 7}), ParseError);
}

TEST(AncestorPairs, PairBoundOnCompleteTrees) {
  for (unsigned m = 0; m <= 8; ++m) {
    auto t = makeCompleteBinaryTree(m);
    const double n = static_cast<double>(t.size());
    for (std::uint32_t ell = 1; ell <= m + 2; ++ell) {
      BigInt tail = ancestorTail(t, ell);
      // Pair bound, exact: tail * 2^(ell-1) <= n^2.
      BigInt lhs = tail * (BigInt(1) << (ell - 1));
      EXPECT_LE(lhs, BigInt(static_cast<unsigned long>(n * n))) << "m=" << m << " ell=" << ell;
    }
  }
}
