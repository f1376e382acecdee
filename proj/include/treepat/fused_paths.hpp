#pragma once

#include <string>
#include <vector>

#include "treepat/digraph.hpp"

namespace treepat {

enum class FusedVariant {
  Labelled,       // every acyclic fusion pattern of r labelled paths
  Unlabelled,     // one representative per isomorphism class
  ConnectedOnly,  // labelled members that are weakly connected
  FamilyF,        // stars with a shared vertex anywhere on each ray
};

/// A digraph together with the vertex sequence of each of its paths.
struct FusedGraph {
  AcyclicDigraph graph;
  std::vector<std::vector<unsigned>> paths;
};

struct FusedPathFamily {
  unsigned k = 0;
  unsigned r = 0;
  FusedVariant variant = FusedVariant::Labelled;
  std::vector<FusedGraph> members;
};

/// Largest k*r the enumeration accepts.
inline constexpr unsigned kFusedSlotCap = 12;

/// Fusing vertices of r disjoint copies of the k-vertex directed path.
/// A labelled member is a partition of the r*k path slots whose quotient
/// stays acyclic (two slots of one path never fuse); the disjoint union is
/// the member with no fusion.
///
/// FamilyF instead takes a common vertex rho and r rays. Ray i is a chain
/// m_{i,1} < ... < m_{i,k-2} < u_i; rho either coincides with one vertex
/// of the ray or sits in one of the k-1 gaps above u_i. Any vertices of
/// different rays may coincide except two sinks. Each (coincidence pattern,
/// gap choice) is one labelled member, so the embedding counts add up to
/// the distinct-tuple Upsilon_r^k exactly.
///
/// Throws InfeasibleError when k*r exceeds 12.
FusedPathFamily enumerateFusedPaths(unsigned k, unsigned r, FusedVariant variant);

FusedVariant parseFusedVariant(const std::string& name);
std::string toString(FusedVariant v);

/// Isomorphism-invariant encoding of a multigraph (minimum adjacency code
/// over relabellings that respect degree and level invariants). Throws
/// InfeasibleError when the relabelling search would exceed 10^7 cases.
std::string canonicalForm(const AcyclicDigraph& g);
bool isomorphic(const AcyclicDigraph& a, const AcyclicDigraph& b);

}  // namespace treepat
