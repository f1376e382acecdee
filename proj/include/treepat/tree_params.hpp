#pragma once

#include <cstdint>

#include "treepat/element_poset.hpp"
#include "treepat/rational.hpp"

namespace treepat {

enum class TupleMode { WithRepetition, Distinct };

/// Upsilon_r^k: sum over ordered r-tuples of elements of
/// c(v_1..v_r) * prod C(d(v_i), k-2).
struct UpsilonSpec {
  unsigned r = 1;
  unsigned k = 2;
  TupleMode mode = TupleMode::WithRepetition;

  void validate() const;  // r >= 1, k >= 2
};

/// Aggregated evaluation: c(v_1..v_r) counts the nodes x whose subtree holds
/// every v_i, so the sum regroups as sum_x F_r(x) where F_r is the r-tuple
/// sum restricted to subtree(x). With repetition F_r = W(x)^r for the
/// subtree weight W; for distinct tuples F_r = r! e_r(weights in subtree),
/// obtained from subtree power sums by Newton's identities.
///
/// On a split tree the tuples range over balls and d is the depth of the
/// ball's node.
BigInt upsilon(const ElementPoset& t, const UpsilonSpec& spec);

/// Literal enumeration of all ordered tuples; the test oracle. Throws
/// InfeasibleError when size^r exceeds 1e9.
BigInt upsilonNaive(const ElementPoset& t, const UpsilonSpec& spec);
inline constexpr double kNaiveTupleCap = 1e9;

BigInt totalPathLength(const RootedTree& t);

/// Ordered pairs of distinct nodes with c(u1, u2) >= ell, i.e. both inside
/// the subtree of one node at depth ell-1.
BigInt ancestorTail(const RootedTree& t, std::uint32_t ell);
BigInt ancestorTailNaive(const RootedTree& t, std::uint32_t ell);

}  // namespace treepat
