#pragma once

#include <vector>

#include "treepat/random.hpp"
#include "treepat/rooted_tree.hpp"

namespace treepat::testing {

/// Random recursive tree with a size drawn uniformly from [lo, hi].
inline RootedTree randomSmallTree(std::size_t lo, std::size_t hi, std::uint64_t seed) {
  SplitMix64 rng(deriveSeed(seed, 0x7e57));
  const std::size_t n = lo + rng.below(hi - lo + 1);
  return makeRandomRecursiveTree(n, seed);
}

/// Trees grown by attaching nodes at a bounded depth spread, to vary the
/// shape beyond random recursive trees: alternates deep and bushy growth.
inline RootedTree randomCaterpillar(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<NodeId> parents{kNoNode};
  for (NodeId v = 1; v < n; ++v) {
    const NodeId lo = v > 3 ? v - 3 : 0;
    parents.push_back(static_cast<NodeId>(lo + rng.below(v - lo)));
  }
  return RootedTree::fromParents(std::move(parents));
}

}  // namespace treepat::testing
