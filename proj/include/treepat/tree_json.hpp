#pragma once

#include <optional>
#include <string>

#include "treepat/element_poset.hpp"
#include "treepat/rooted_tree.hpp"
#include "treepat/split_tree.hpp"

namespace treepat {

/// Tree documents:
///   {"nodes":[{"id":0,"parent":null,"balls":[1,2]}, ...],
///    "meta":{"b":2,"s":1,"s0":1,"s1":0,"distribution":"bst","seed":7,"n":2}}
/// `balls` and `meta` appear only for split trees. Ids are 0..n-1 in any
/// order; exactly one parent is null.
std::string serializeTree(const RootedTree& t);
std::string serializeTree(const SplitTree& t);

/// A parsed document: a split tree when any node lists balls.
class TreeDocument {
 public:
  explicit TreeDocument(RootedTree t) : plain_(std::move(t)) {}
  explicit TreeDocument(SplitTree t) : split_(std::move(t)) {}

  bool isSplit() const { return split_.has_value(); }
  const RootedTree& tree() const { return split_ ? split_->tree() : *plain_; }
  const SplitTree& split() const { return *split_; }
  /// Borrowing view; the document must outlive it.
  ElementPoset poset() const { return split_ ? ElementPoset(*split_) : ElementPoset(*plain_); }
  std::string serialize() const { return split_ ? serializeTree(*split_) : serializeTree(*plain_); }

 private:
  std::optional<RootedTree> plain_;
  std::optional<SplitTree> split_;
};

/// Throws ParseError naming the offending node on malformed input.
TreeDocument parseTreeDocument(const std::string& text);
RootedTree deserializeTree(const std::string& text);

}  // namespace treepat
