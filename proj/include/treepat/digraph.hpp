#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace treepat {

/// Small directed acyclic multigraph (parallel edges kept) on vertices
/// 0..n-1, n <= 64. Reachability is stored as bitmasks.
class AcyclicDigraph {
 public:
  using Edge = std::pair<unsigned, unsigned>;
  static constexpr unsigned kMaxVertices = 64;

  /// Throws std::invalid_argument on out-of-range endpoints, self loops or
  /// a directed cycle (the message lists one cycle).
  AcyclicDigraph(unsigned vertexCount, std::vector<Edge> edges);

  /// One "u v" pair per line, 0-based; a line holding a single index
  /// declares an isolated vertex; '#' starts a comment. Throws ParseError.
  static AcyclicDigraph parseEdgeList(const std::string& text);
  std::string toEdgeList() const;

  unsigned vertexCount() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<unsigned>& successors(unsigned v) const { return out_[v]; }
  const std::vector<unsigned>& predecessors(unsigned v) const { return in_[v]; }
  /// Vertices strictly below / above v in the reachability order.
  std::uint64_t descendants(unsigned v) const { return below_[v]; }
  std::uint64_t ancestors(unsigned v) const { return above_[v]; }
  bool less(unsigned u, unsigned v) const { return (below_[u] >> v) & 1u; }
  const std::vector<unsigned>& topologicalOrder() const { return topo_; }
  bool isWeaklyConnected() const;

 private:
  unsigned n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<unsigned>> out_, in_;
  std::vector<std::uint64_t> below_, above_;
  std::vector<unsigned> topo_;
};

/// Sinks A0, vertices reaching exactly one sink A1, the rest A2.
struct VertexClassification {
  std::vector<unsigned> sinks;
  std::vector<unsigned> ancestors;
  std::vector<unsigned> commonAncestors;
};

VertexClassification classifyVertices(const AcyclicDigraph& g);

/// v_0 -> v_1 -> ... -> v_{k-1}.
AcyclicDigraph directedPath(unsigned k);
/// r directed k-vertex paths sharing their source (vertex 0). Ray i holds
/// vertices 1 + i(k-1) .. (i+1)(k-1), its sink last.
AcyclicDigraph star(unsigned k, unsigned r);
/// 0 -> 1, 0 -> 2, 1 -> 3, 2 -> 3.
AcyclicDigraph diamond();

}  // namespace treepat
