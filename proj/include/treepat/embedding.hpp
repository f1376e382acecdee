#pragma once

#include "treepat/digraph.hpp"
#include "treepat/element_poset.hpp"
#include "treepat/rational.hpp"

namespace treepat {

inline constexpr unsigned kEmbeddingVertexCap = 12;

/// [G]_T: injections of V(G) into the elements of t with u < v in G
/// implying iota(u) < iota(v). Throws InfeasibleError above 12 vertices.
///
/// Dynamic programme over the tree: for each node x and each set S of
/// G-vertices closed under successors, the number of ways to embed S into
/// the subtree of x. S splits into the source vertices A placed in x's bag
/// (|A|! C(bag, |A|) placements) and successor-closed parts handed to
/// distinct children.
BigInt embeddingCount(const AcyclicDigraph& g, const ElementPoset& t);

/// Backtracking over a topological order of G; the test oracle.
BigInt embeddingCountBacktrack(const AcyclicDigraph& g, const ElementPoset& t);

/// [S_{k,r}]_T on a node tree in closed form. For distinct sinks
/// (u_1..u_r) and each admissible root image rho (a proper ancestor of
/// every u_i), ray i needs k-2 interior nodes strictly between rho and
/// u_i; rays may not reuse a node and may not use another sink. Interior
/// nodes are grouped by the set of rays whose segment contains them, and
/// the disjoint choices are counted by multinomials over those groups.
/// Throws InfeasibleError when n^r exceeds 1e9.
BigInt starCountFormula(const RootedTree& t, unsigned k, unsigned r);

/// The product form sum_u sum_rho prod_i C(d(u_i) - d(rho) - 1, k-2) over
/// distinct sink tuples and proper common ancestors rho. Ignores
/// collisions between rays, so it overcounts once k >= 3 and r >= 2.
BigInt starCountApprox(const RootedTree& t, unsigned k, unsigned r);

}  // namespace treepat
