#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treepat/random.hpp"
#include "treepat/rational.hpp"
#include "treepat/rooted_tree.hpp"

namespace treepat {

using BallId = std::uint32_t;  // 1..n in insertion order

/// Distribution of the split vector (V_1, ..., V_b).
class SplitDistribution {
 public:
  enum class Kind { Bst, Dirichlet, Fixed };

  /// (U, 1-U) with U uniform on [0, 1]; b = 2.
  static SplitDistribution bst();
  /// Symmetric Dirichlet(a, ..., a) of length b.
  static SplitDistribution dirichlet(double a, unsigned b);
  /// Deterministic vector, randomly permuted per node so that the
  /// components are identically distributed.
  static SplitDistribution fixed(std::vector<Rational> probabilities);
  /// "bst", "dirichlet:<a>" (length taken from b) or "fixed:p1,p2,...".
  static SplitDistribution parse(const std::string& text, unsigned b);

  Kind kind() const { return kind_; }
  /// Number of components, or 0 for dirichlet before it is bound to b.
  unsigned length() const { return length_; }
  double dirichletShape() const { return shape_; }
  const std::vector<Rational>& fixedProbabilities() const { return fixed_; }
  std::string name() const;

  void sample(SplitMix64& rng, std::span<double> out) const;

 private:
  Kind kind_ = Kind::Bst;
  unsigned length_ = 2;
  double shape_ = 1.0;
  std::vector<Rational> fixed_;
};

struct SplitParams {
  unsigned b = 2;
  unsigned s = 1;
  unsigned s0 = 1;
  unsigned s1 = 0;
  SplitDistribution distribution = SplitDistribution::bst();

  /// b=2, s=s0=1, s1=0, split (U, 1-U): the random binary search tree.
  static SplitParams bstPreset() { return {}; }

  /// Throws std::invalid_argument unless 2 <= b, 0 < s, 1 <= s0 <= s,
  /// b*s1 <= s+1-s0, the distribution has length b and P(V_i = 1) < 1.
  void validate() const;
};

/// A split tree: node tree whose nodes are bags of balls.
class SplitTree {
 public:
  SplitTree(RootedTree tree, std::vector<std::vector<BallId>> bags, SplitParams params,
            std::uint64_t seed);

  const RootedTree& tree() const { return tree_; }
  const std::vector<BallId>& bag(NodeId v) const { return bags_[v]; }
  const std::vector<std::vector<BallId>>& bags() const { return bags_; }
  const SplitParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t ballCount() const { return ballNode_.size(); }

  /// Node holding ball j; throws std::invalid_argument for unknown ids.
  NodeId nodeOf(BallId ball) const;
  /// Ball order: node(j1) is a proper ancestor of node(j2). Balls sharing a
  /// bag are incomparable.
  bool ballLess(BallId j1, BallId j2) const;
  bool incomparable(BallId j1, BallId j2) const;

  /// Element view used by the counting code: entry j-1 is node(j).
  const std::vector<NodeId>& ballNodes() const { return ballNode_; }

 private:
  RootedTree tree_;
  std::vector<std::vector<BallId>> bags_;
  std::vector<NodeId> ballNode_;
  SplitParams params_;
  std::uint64_t seed_;
};

/// Ball-by-ball trickle-down insertion, then pruning of ball-less subtrees.
/// Deterministic in (params, n, seed).
SplitTree generateTrickleDown(const SplitParams& params, std::size_t n, std::uint64_t seed);

/// Recursive multinomial construction of the subtree sizes; ball ids are
/// then assigned to bags uniformly at random.
SplitTree generateMultinomial(const SplitParams& params, std::size_t n, std::uint64_t seed);

/// Nodes that are ancestors of ball j, the containing node included.
std::uint64_t ballAncestorCount(const SplitTree& t, BallId ball);
/// Nodes that are (weak) ancestors of every containing node.
std::uint64_t ballCommonAncestors(const SplitTree& t, std::span<const BallId> balls);

/// E[sum_i V_i^2] with its provenance.
struct SameChildBound {
  double value = 0;
  std::optional<Rational> exact;  // closed form when rational
  double standardError = 0;       // nonzero only for the Monte Carlo path
};

/// Closed form for the presets.
SameChildBound sameChildProbabilityBound(const SplitParams& params);
/// Sampling estimate; the fallback for distributions without a closed form.
SameChildBound sameChildProbabilityMonteCarlo(const SplitParams& params, std::size_t samples,
                                              std::uint64_t seed);

/// mu = sum_i E[V_i ln V_i] (negative).
double splitEntropyMu(const SplitParams& params);

}  // namespace treepat
