#include "treepat/rooted_tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "treepat/errors.hpp"
#include "treepat/random.hpp"

namespace treepat {

RootedTree RootedTree::fromParents(std::vector<NodeId> parents) {
  const std::size_t n = parents.size();
  if (n == 0) throw ParseError("tree has no nodes");
  if (n >= kNoNode) throw InfeasibleError("node count exceeds the 32-bit index type");

  RootedTree t;
  t.root_ = kNoNode;
  for (NodeId v = 0; v < n; ++v) {
    if (parents[v] == kNoNode) {
      if (t.root_ != kNoNode) {
        throw ParseError("multiple roots: nodes " + std::to_string(t.root_) + " and " +
                         std::to_string(v) + " have no parent");
      }
      t.root_ = v;
    } else if (parents[v] >= n) {
      throw ParseError("node " + std::to_string(v) + " has out-of-range parent " +
                       std::to_string(parents[v]));
    } else if (parents[v] == v) {
      throw ParseError("cyclic parent reference at node " + std::to_string(v));
    }
  }
  if (t.root_ == kNoNode) throw ParseError("no root: every node has a parent");

  t.childBegin_.assign(n + 1, 0);
  for (NodeId v = 0; v < n; ++v)
    if (parents[v] != kNoNode) ++t.childBegin_[parents[v] + 1];
  for (std::size_t i = 0; i < n; ++i) t.childBegin_[i + 1] += t.childBegin_[i];
  t.childList_.resize(n - 1);
  {
    std::vector<std::uint32_t> fill(t.childBegin_.begin(), t.childBegin_.end() - 1);
    for (NodeId v = 0; v < n; ++v)
      if (parents[v] != kNoNode) t.childList_[fill[parents[v]]++] = v;
  }

  t.depth_.assign(n, 0);
  t.preorder_.reserve(n);
  std::vector<NodeId> stack{t.root_};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    t.preorder_.push_back(v);
    for (std::uint32_t i = t.childBegin_[v + 1]; i-- > t.childBegin_[v];) {
      const NodeId c = t.childList_[i];
      t.depth_[c] = t.depth_[v] + 1;
      stack.push_back(c);
    }
  }
  if (t.preorder_.size() != n) {
    // Nodes unreachable from the root sit on a parent cycle.
    std::vector<char> seen(n, 0);
    for (NodeId v : t.preorder_) seen[v] = 1;
    const auto it = std::find(seen.begin(), seen.end(), 0);
    throw ParseError("cyclic parent reference at node " +
                     std::to_string(static_cast<std::size_t>(it - seen.begin())));
  }

  t.subtreeSize_.assign(n, 1);
  for (auto it = t.preorder_.rbegin(); it != t.preorder_.rend(); ++it)
    if (parents[*it] != kNoNode) t.subtreeSize_[parents[*it]] += t.subtreeSize_[*it];
  t.height_ = *std::max_element(t.depth_.begin(), t.depth_.end());
  t.parent_ = std::move(parents);
  return t;
}

std::optional<NodeId> RootedTree::parent(NodeId v) const {
  checkIndex(v);
  if (parent_[v] == kNoNode) return std::nullopt;
  return parent_[v];
}

std::span<const NodeId> RootedTree::children(NodeId v) const {
  return {childList_.data() + childBegin_[v], childList_.data() + childBegin_[v + 1]};
}

void RootedTree::checkIndex(NodeId v) const {
  if (v >= parent_.size())
    throw std::invalid_argument("node index " + std::to_string(v) + " out of range (n = " +
                                std::to_string(parent_.size()) + ")");
}

bool RootedTree::isAncestor(NodeId a, NodeId b) const {
  checkIndex(a);
  checkIndex(b);
  if (depth_[a] >= depth_[b]) return false;
  while (depth_[b] > depth_[a]) b = parent_[b];
  return a == b;
}

NodeId RootedTree::lcaUnchecked(NodeId a, NodeId b) const {
  while (depth_[a] > depth_[b]) a = parent_[a];
  while (depth_[b] > depth_[a]) b = parent_[b];
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
  }
  return a;
}

NodeId RootedTree::lca(NodeId a, NodeId b) const {
  checkIndex(a);
  checkIndex(b);
  return lcaUnchecked(a, b);
}

NodeSetAncestry RootedTree::commonAncestors(std::span<const NodeId> vs) const {
  if (vs.empty()) throw std::invalid_argument("commonAncestors needs at least one node");
  for (NodeId v : vs) checkIndex(v);
  NodeId acc = vs.front();
  for (NodeId v : vs.subspan(1)) acc = lcaUnchecked(acc, v);
  return {acc, static_cast<std::uint64_t>(depth_[acc]) + 1};
}

RootedTree makeCompleteBinaryTree(unsigned height) {
  if (height >= 31)
    throw InfeasibleError("complete binary tree of height " + std::to_string(height) +
                          " overflows the 32-bit node index (max height 30)");
  const std::size_t n = (std::size_t{1} << (height + 1)) - 1;
  std::vector<NodeId> parents(n);
  parents[0] = kNoNode;
  for (std::size_t v = 1; v < n; ++v) parents[v] = static_cast<NodeId>((v - 1) / 2);
  return RootedTree::fromParents(std::move(parents));
}

RootedTree makePath(std::size_t length) {
  if (length == 0) throw std::invalid_argument("path length must be at least 1");
  std::vector<NodeId> parents(length);
  parents[0] = kNoNode;
  for (std::size_t v = 1; v < length; ++v) parents[v] = static_cast<NodeId>(v - 1);
  return RootedTree::fromParents(std::move(parents));
}

RootedTree makeRandomRecursiveTree(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("tree must have at least one node");
  SplitMix64 rng(deriveSeed(seed, 0x7265637572ULL));
  std::vector<NodeId> parents(n);
  parents[0] = kNoNode;
  for (std::size_t v = 1; v < n; ++v) parents[v] = static_cast<NodeId>(rng.below(v));
  return RootedTree::fromParents(std::move(parents));
}

}  // namespace treepat
