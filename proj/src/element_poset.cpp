#include "treepat/element_poset.hpp"

#include <numeric>

namespace treepat {

ElementPoset::ElementPoset(const RootedTree& tree) : tree_(&tree) {
  bagBegin_.resize(tree.size() + 1);
  std::iota(bagBegin_.begin(), bagBegin_.end(), 0u);
  bagElements_.resize(tree.size());
  std::iota(bagElements_.begin(), bagElements_.end(), 0u);
}

ElementPoset::ElementPoset(const SplitTree& split)
    : tree_(&split.tree()), elementNode_(split.ballNodes()) {
  const auto& bags = split.bags();
  bagBegin_.assign(bags.size() + 1, 0);
  for (std::size_t v = 0; v < bags.size(); ++v)
    bagBegin_[v + 1] = bagBegin_[v] + static_cast<std::uint32_t>(bags[v].size());
  bagElements_.reserve(bagBegin_.back());
  for (const auto& bag : bags)
    for (BallId j : bag) bagElements_.push_back(j - 1);
}

std::span<const std::uint32_t> ElementPoset::elementsAt(NodeId v) const {
  return {bagElements_.data() + bagBegin_[v], bagElements_.data() + bagBegin_[v + 1]};
}

bool ElementPoset::less(std::size_t a, std::size_t b) const {
  return tree_->isAncestor(nodeOf(a), nodeOf(b));
}

}  // namespace treepat
