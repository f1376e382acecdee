#pragma once

#include <span>
#include <vector>

#include "treepat/rooted_tree.hpp"
#include "treepat/split_tree.hpp"

namespace treepat {

/// The labelled universe of a tree: its nodes for a plain tree, its balls
/// for a split tree. Element e lives in node nodeOf(e); two elements are
/// ordered iff their nodes are in a proper ancestor relation, so elements
/// sharing a bag are incomparable.
///
/// Non-owning: the referenced tree must outlive the view.
class ElementPoset {
 public:
  ElementPoset(const RootedTree& tree);  // NOLINT: implicit by design of the API
  ElementPoset(const SplitTree& tree);   // NOLINT

  const RootedTree& tree() const { return *tree_; }
  std::size_t size() const { return elementNode_.empty() ? tree_->size() : elementNode_.size(); }
  NodeId nodeOf(std::size_t e) const {
    return elementNode_.empty() ? static_cast<NodeId>(e) : elementNode_[e];
  }
  /// Elements held by node v.
  std::span<const std::uint32_t> elementsAt(NodeId v) const;
  std::uint64_t bagSize(NodeId v) const { return elementsAt(v).size(); }
  bool less(std::size_t a, std::size_t b) const;
  bool isSplit() const { return !elementNode_.empty(); }

 private:
  const RootedTree* tree_;
  std::span<const NodeId> elementNode_;  // empty for node trees
  std::vector<std::uint32_t> bagBegin_;
  std::vector<std::uint32_t> bagElements_;
};

}  // namespace treepat
