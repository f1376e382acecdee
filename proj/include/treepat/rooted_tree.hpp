#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace treepat {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// c(v1, ..., vr) together with the least common ancestor realising it.
struct NodeSetAncestry {
  NodeId lca;
  std::uint64_t commonAncestorCount;  // depth(lca) + 1
};

/// Immutable rooted tree over dense node indexes 0..n-1.
///
/// Children keep the order in which they were supplied (increasing id for
/// trees built from a parent array). All queries are read-only, so a tree
/// can be shared between threads freely.
class RootedTree {
 public:
  /// Builds from a parent array; exactly one entry must be kNoNode.
  /// Throws ParseError naming the offending node on multiple roots,
  /// missing root, out-of-range parents or cycles.
  static RootedTree fromParents(std::vector<NodeId> parents);

  std::size_t size() const { return parent_.size(); }
  NodeId root() const { return root_; }
  std::optional<NodeId> parent(NodeId v) const;
  std::span<const NodeId> children(NodeId v) const;
  std::uint32_t depth(NodeId v) const { return depth_[v]; }
  std::uint32_t height() const { return height_; }
  bool isLeaf(NodeId v) const { return childBegin_[v] == childBegin_[v + 1]; }

  /// Nodes in depth-first preorder (parents before children).
  const std::vector<NodeId>& preorder() const { return preorder_; }
  /// Number of nodes in the subtree rooted at v, v included.
  std::uint64_t subtreeSize(NodeId v) const { return subtreeSize_[v]; }

  /// Strict: a is a proper ancestor of b. Throws std::invalid_argument on
  /// out-of-range indexes.
  bool isAncestor(NodeId a, NodeId b) const;
  NodeId lca(NodeId a, NodeId b) const;
  /// Repetition allowed; throws std::invalid_argument on an empty list.
  NodeSetAncestry commonAncestors(std::span<const NodeId> vs) const;

  /// Structural equality (same parent array, same root).
  bool operator==(const RootedTree& other) const { return parent_ == other.parent_; }

  const std::vector<NodeId>& parents() const { return parent_; }

 private:
  RootedTree() = default;
  void checkIndex(NodeId v) const;
  NodeId lcaUnchecked(NodeId a, NodeId b) const;

  NodeId root_ = 0;
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> childBegin_;
  std::vector<NodeId> childList_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint64_t> subtreeSize_;
  std::vector<NodeId> preorder_;
  std::uint32_t height_ = 0;
};

/// 2^(height+1) - 1 nodes in breadth-first order (children of v are 2v+1,
/// 2v+2). Throws InfeasibleError when the node count does not fit NodeId.
RootedTree makeCompleteBinaryTree(unsigned height);

/// Rooted path on `length` nodes; node i's sole child is i+1.
RootedTree makePath(std::size_t length);

/// Random recursive tree: node i > 0 attaches to a uniform earlier node.
RootedTree makeRandomRecursiveTree(std::size_t n, std::uint64_t seed);

}  // namespace treepat
