#include "treepat/digraph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "treepat/errors.hpp"

namespace treepat {

AcyclicDigraph::AcyclicDigraph(unsigned vertexCount, std::vector<Edge> edges)
    : n_(vertexCount), edges_(std::move(edges)), out_(vertexCount), in_(vertexCount) {
  if (n_ > kMaxVertices)
    throw std::invalid_argument("digraph has " + std::to_string(n_) + " vertices; at most 64 are supported");
  for (const auto& [u, v] : edges_) {
    if (u >= n_ || v >= n_)
      throw std::invalid_argument("edge " + std::to_string(u) + " -> " + std::to_string(v) + " is out of range");
    if (u == v) throw std::invalid_argument("self loop at vertex " + std::to_string(u) + " forms a cycle");
    out_[u].push_back(v);
    in_[v].push_back(u);
  }
  // Kahn's algorithm; leftovers lie on or behind a cycle.
  std::vector<unsigned> indeg(n_);
  for (unsigned v = 0; v < n_; ++v) indeg[v] = static_cast<unsigned>(in_[v].size());
  std::vector<unsigned> ready;
  for (unsigned v = n_; v-- > 0;)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    unsigned v = ready.back();
    ready.pop_back();
    topo_.push_back(v);
    for (unsigned w : out_[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  if (topo_.size() != n_) {
    // Walk backwards along unprocessed in-edges until a vertex repeats.
    unsigned v = 0;
    while (indeg[v] == 0) ++v;
    std::vector<int> seenAt(n_, -1);
    std::vector<unsigned> walk;
    while (seenAt[v] < 0) {
      seenAt[v] = static_cast<int>(walk.size());
      walk.push_back(v);
      for (unsigned u : in_[v])
        if (indeg[u] > 0) {
          v = u;
          break;
        }
    }
    std::vector<unsigned> cycle(walk.begin() + seenAt[v], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    std::string text;
    for (unsigned c : cycle) text += std::to_string(c) + " -> ";
    text += std::to_string(cycle.front());
    throw std::invalid_argument("digraph has a directed cycle: " + text);
  }
  below_.assign(n_, 0);
  above_.assign(n_, 0);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it)
    for (unsigned w : out_[*it]) below_[*it] |= below_[w] | (std::uint64_t{1} << w);
  for (unsigned v : topo_)
    for (unsigned u : in_[v]) above_[v] |= above_[u] | (std::uint64_t{1} << u);
}

AcyclicDigraph AcyclicDigraph::parseEdgeList(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Edge> edges;
  unsigned n = 0;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<long> values;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      long x = -1;
      try {
        x = std::stol(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || x < 0 || x >= static_cast<long>(kMaxVertices))
        throw ParseError("edge list line " + std::to_string(lineNo) + ": bad vertex '" + tok + "'");
      values.push_back(x);
    }
    if (values.empty()) continue;
    if (values.size() > 2)
      throw ParseError("edge list line " + std::to_string(lineNo) + ": expected 'u v'");
    for (long x : values) n = std::max(n, static_cast<unsigned>(x) + 1);
    if (values.size() == 2) edges.emplace_back(static_cast<unsigned>(values[0]), static_cast<unsigned>(values[1]));
  }
  if (n == 0) throw ParseError("edge list declares no vertices");
  try {
    return AcyclicDigraph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string AcyclicDigraph::toEdgeList() const {
  std::string out;
  std::vector<char> touched(n_, 0);
  for (const auto& [u, v] : edges_) {
    out += std::to_string(u) + " " + std::to_string(v) + "\n";
    touched[u] = touched[v] = 1;
  }
  for (unsigned v = 0; v < n_; ++v)
    if (!touched[v]) out += std::to_string(v) + "\n";
  return out;
}

bool AcyclicDigraph::isWeaklyConnected() const {
  if (n_ == 0) return true;
  std::uint64_t seen = 1, frontier = 1;
  while (frontier) {
    unsigned v = static_cast<unsigned>(std::countr_zero(frontier));
    frontier &= frontier - 1;
    for (const auto* list : {&out_[v], &in_[v]})
      for (unsigned w : *list)
        if (!((seen >> w) & 1u)) {
          seen |= std::uint64_t{1} << w;
          frontier |= std::uint64_t{1} << w;
        }
  }
  return std::popcount(seen) == static_cast<int>(n_);
}

VertexClassification classifyVertices(const AcyclicDigraph& g) {
  std::uint64_t sinkMask = 0;
  for (unsigned v = 0; v < g.vertexCount(); ++v)
    if (g.successors(v).empty()) sinkMask |= std::uint64_t{1} << v;
  VertexClassification out;
  for (unsigned v = 0; v < g.vertexCount(); ++v) {
    const int reached = std::popcount(g.descendants(v) & sinkMask);
    if (g.successors(v).empty()) out.sinks.push_back(v);
    else if (reached == 1) out.ancestors.push_back(v);
    else out.commonAncestors.push_back(v);
  }
  return out;
}

AcyclicDigraph directedPath(unsigned k) {
  if (k == 0) throw std::invalid_argument("directed path needs k >= 1");
  std::vector<AcyclicDigraph::Edge> edges;
  for (unsigned i = 0; i + 1 < k; ++i) edges.emplace_back(i, i + 1);
  return AcyclicDigraph(k, std::move(edges));
}

AcyclicDigraph star(unsigned k, unsigned r) {
  if (k < 2 || r < 1) throw std::invalid_argument("star needs k >= 2 and r >= 1");
  std::vector<AcyclicDigraph::Edge> edges;
  for (unsigned i = 0; i < r; ++i) {
    unsigned prev = 0;
    for (unsigned j = 0; j + 1 < k; ++j) {
      unsigned v = 1 + i * (k - 1) + j;
      edges.emplace_back(prev, v);
      prev = v;
    }
  }
  return AcyclicDigraph(1 + r * (k - 1), std::move(edges));
}

AcyclicDigraph diamond() { return AcyclicDigraph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

}  // namespace treepat
