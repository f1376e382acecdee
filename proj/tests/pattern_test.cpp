#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "test_trees.hpp"
#include "treepat/errors.hpp"
#include "treepat/pattern.hpp"
#include "treepat/split_tree.hpp"

using namespace treepat;
using treepat::testing::randomSmallTree;

namespace {

// Literal definition: every k-subset of elements that forms a chain.
std::uint64_t bruteCount(const ElementPoset& t, const Pattern& alpha, const Labelling& pi) {
  const std::size_t n = t.size(), k = alpha.length();
  if (k > n) return 0;
  std::vector<char> pick(n, 0);
  std::fill(pick.end() - static_cast<long>(k), pick.end(), 1);
  std::uint64_t count = 0;
  do {
    std::vector<std::size_t> chosen;
    for (std::size_t e = 0; e < n; ++e)
      if (pick[e]) chosen.push_back(e);
    std::sort(chosen.begin(), chosen.end(), [&](auto a, auto b) {
      return t.tree().depth(t.nodeOf(a)) < t.tree().depth(t.nodeOf(b));
    });
    bool chain = true;
    for (std::size_t i = 0; i + 1 < k && chain; ++i) chain = t.less(chosen[i], chosen[i + 1]);
    if (!chain) continue;
    bool match = true;
    for (std::size_t i = 0; i < k && match; ++i)
      for (std::size_t j = 0; j < k && match; ++j)
        match = (pi[chosen[i]] < pi[chosen[j]]) == (alpha.entries()[i] < alpha.entries()[j]);
    count += match;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return count;
}

Rational pmfMean(const std::map<std::uint64_t, Rational>& pmf) {
  Rational m = 0;
  for (const auto& [v, p] : pmf) m += p * static_cast<unsigned long>(v);
  return m;
}

}  // namespace

TEST(Pattern, Parse) {
  EXPECT_EQ(Pattern::parse("231").entries(), (std::vector<unsigned>{2, 3, 1}));
  EXPECT_EQ(Pattern::parse("1,10,2,3,4,5,6,7,8,9").length(), 10u);
  EXPECT_EQ(Pattern::parse("1,10,2,3,4,5,6,7,8,9").str(), "1,10,2,3,4,5,6,7,8,9");
  EXPECT_THROW(Pattern::parse("22"), std::invalid_argument);
  EXPECT_THROW(Pattern::parse("13"), std::invalid_argument);
  EXPECT_THROW(Pattern::parse(""), std::invalid_argument);
  EXPECT_THROW(Pattern::parse("1,x"), std::invalid_argument);
  EXPECT_EQ(allPatterns(4).size(), 24u);
}

TEST(Labelling, Validation) {
  EXPECT_THROW(Labelling({1, 1}), std::invalid_argument);
  EXPECT_THROW(Labelling({0, 1}), std::invalid_argument);
  EXPECT_EQ(sampleLabelling(1, 99).labels(), std::vector<std::uint32_t>{1});
  EXPECT_THROW(sampleLabelling(0, 1), std::invalid_argument);
  EXPECT_EQ(sampleLabelling(50, 7).labels(), sampleLabelling(50, 7).labels());
}

TEST(Labelling, UniformOverSixPermutations) {
  std::map<std::vector<std::uint32_t>, int> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hits[sampleLabelling(3, deriveSeed(123, i)).labels()];
  ASSERT_EQ(hits.size(), 6u);
  double chi2 = 0, expected = draws / 6.0;
  for (const auto& [perm, c] : hits) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 15.09);  // chi-square 5 dof, upper 1% point
}

TEST(Count, SmallExamples) {
  auto p2 = makePath(2);
  EXPECT_EQ(countOccurrences(p2, Pattern::parse("21"), Labelling({2, 1})), 1u);
  EXPECT_EQ(countOccurrences(p2, Pattern::parse("21"), Labelling({1, 2})), 0u);
  auto p4 = makePath(4);
  EXPECT_EQ(countOccurrences(p4, Pattern::parse("12345"), Labelling::identity(4)), 0u);
  EXPECT_EQ(countOccurrences(p4, Pattern::parse("1234"), Labelling::identity(4)), 1u);
  EXPECT_EQ(countOccurrences(makePath(5), Pattern::parse("1"), Labelling::identity(5)), 5u);
  EXPECT_THROW(countOccurrences(p4, Pattern::parse("21"), Labelling::identity(3)), std::invalid_argument);
}

TEST(Count, MatchesBruteForceOnRandomTrees) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto t = randomSmallTree(1, 12, seed);
    for (unsigned k = 1; k <= 4; ++k)
      for (const auto& alpha : allPatterns(k)) {
        auto pi = sampleLabelling(t.size(), deriveSeed(seed, k));
        ASSERT_EQ(countOccurrences(t, alpha, pi), bruteCount(t, alpha, pi)) << "seed " << seed << " " << alpha.str();
      }
  }
}

TEST(Count, SplitTreeNeverPairsBagMates) {
  // Root bag {1,2}, single child bag {3}.
  SplitParams p;
  p.s = 2;
  p.s0 = 2;
  SplitTree t(RootedTree::fromParents({kNoNode, 0}), {{1, 2}, {3}}, p, 0);
  ElementPoset poset(t);
  EXPECT_EQ(countOccurrences(poset, Pattern::parse("12"), Labelling({1, 2, 3})), 2u);
  EXPECT_EQ(countOccurrences(poset, Pattern::parse("21"), Labelling({1, 2, 3})), 0u);
  EXPECT_EQ(countOccurrences(poset, Pattern::parse("123"), Labelling({1, 2, 3})), 0u);
}

TEST(Count, SplitTreesMatchBruteForce) {
  SplitParams p;
  p.b = 2;
  p.s = 3;
  p.s0 = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = generateTrickleDown(p, 11, seed);
    ElementPoset poset(t);
    for (unsigned k = 2; k <= 4; ++k)
      for (const auto& alpha : allPatterns(k)) {
        auto pi = sampleLabelling(11, deriveSeed(seed, 100 + k));
        ASSERT_EQ(countOccurrences(poset, alpha, pi), bruteCount(poset, alpha, pi));
      }
  }
}

TEST(Mean, Examples) {
  EXPECT_EQ(expectedOccurrences(makePath(3), Pattern::parse("21")), Rational(3, 2));
  EXPECT_EQ(expectedOccurrences(makeCompleteBinaryTree(2), Pattern::parse("12")), Rational(5));
}

TEST(Mean, ExactAverageOverAllLabellings) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto t = randomSmallTree(1, 7, seed);
    for (unsigned k = 1; k <= 4; ++k) {
      Rational common = expectedOccurrences(t, allPatterns(k).front());
      for (const auto& alpha : allPatterns(k)) {
        EXPECT_EQ(expectedOccurrences(t, alpha), common);
        EXPECT_EQ(pmfMean(exactDistribution(t, alpha)), common);
      }
    }
  }
}

TEST(Mean, SplitTreeBagFormula) {
  SplitParams p;
  p.b = 2;
  p.s = 3;
  p.s0 = 2;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto t = generateTrickleDown(p, 8, seed);
    ElementPoset poset(t);
    for (unsigned k = 2; k <= 4; ++k) {
      const Pattern alpha = allPatterns(k).back();
      EXPECT_EQ(pmfMean(exactDistribution(poset, alpha)), expectedOccurrences(poset, alpha));
      // s0^(k-1) C(d, k-1) per ball: every proper ancestor bag holds s0 balls.
      BigInt sum = 0;
      for (BallId j = 1; j <= 8; ++j)
        sum += binomial(t.tree().depth(t.nodeOf(j)), k - 1) * BigInt(1u << (k - 1));
      EXPECT_EQ(expectedOccurrences(poset, alpha), makeRational(sum, factorial(k)));
    }
  }
}

TEST(Distribution, Examples) {
  auto d2 = exactDistribution(makePath(2), Pattern::parse("21"));
  EXPECT_EQ(d2, (std::map<std::uint64_t, Rational>{{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
  auto d3 = exactDistribution(makePath(3), Pattern::parse("21"));
  EXPECT_EQ(d3, (std::map<std::uint64_t, Rational>{
                    {0, Rational(1, 6)}, {1, Rational(1, 3)}, {2, Rational(1, 3)}, {3, Rational(1, 6)}}));
  auto cbt = exactDistribution(makeCompleteBinaryTree(2), Pattern::parse("21"));
  EXPECT_EQ(pmfMean(cbt), Rational(5));
  EXPECT_THROW(exactDistribution(makePath(10), Pattern::parse("21")), InfeasibleError);
}

TEST(Distribution, SumsToOneAndSupportBound) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto t = randomSmallTree(2, 7, seed);
    for (unsigned k = 2; k <= 3; ++k) {
      auto pmf = exactDistribution(t, allPatterns(k)[seed % allPatterns(k).size()]);
      Rational total = 0;
      for (const auto& [v, p] : pmf) total += p;
      EXPECT_EQ(total, 1);
      EXPECT_LE(BigInt(static_cast<unsigned long>(pmf.rbegin()->first)), binomial(t.size(), k));
    }
  }
}
