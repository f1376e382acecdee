#include "treepat/fused_paths.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>

#include "treepat/errors.hpp"

namespace treepat {

namespace {

using Edge = AcyclicDigraph::Edge;

bool acyclic(unsigned n, const std::vector<Edge>& edges) {
  std::vector<unsigned> indeg(n, 0);
  std::vector<std::vector<unsigned>> out(n);
  for (const auto& [u, v] : edges) {
    if (u == v) return false;
    out[u].push_back(v);
    ++indeg[v];
  }
  std::vector<unsigned> ready;
  for (unsigned v = 0; v < n; ++v)
    if (!indeg[v]) ready.push_back(v);
  unsigned seen = 0;
  while (!ready.empty()) {
    unsigned v = ready.back();
    ready.pop_back();
    ++seen;
    for (unsigned w : out[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  return seen == n;
}

std::vector<Edge> pathEdges(const std::vector<std::vector<unsigned>>& paths) {
  std::vector<Edge> edges;
  for (const auto& p : paths)
    for (std::size_t j = 0; j + 1 < p.size(); ++j) edges.emplace_back(p[j], p[j + 1]);
  return edges;
}

// Restricted-growth assignment of items to classes, subject to `allowed`.
// Calls done(classOf, classCount) for every admissible partition.
void forEachPartition(unsigned items, const std::function<bool(unsigned, unsigned)>& canJoin,
                      const std::function<void(unsigned, unsigned)>& join,
                      const std::function<void(unsigned, unsigned)>& leave,
                      const std::function<void(const std::vector<unsigned>&, unsigned)>& done) {
  std::vector<unsigned> cls(items);
  std::function<void(unsigned, unsigned)> go = [&](unsigned item, unsigned classes) {
    if (item == items) {
      done(cls, classes);
      return;
    }
    for (unsigned c = 0; c <= classes; ++c) {
      if (c < classes && !canJoin(item, c)) continue;
      cls[item] = c;
      join(item, c);
      go(item + 1, c == classes ? classes + 1 : classes);
      leave(item, c);
    }
  };
  go(0, 0);
}

FusedPathFamily labelledFamily(unsigned k, unsigned r) {
  FusedPathFamily fam;
  std::vector<std::uint32_t> pathsIn(k * r, 0);
  forEachPartition(
      k * r, [&](unsigned s, unsigned c) { return !((pathsIn[c] >> (s / k)) & 1u); },
      [&](unsigned s, unsigned c) { pathsIn[c] |= 1u << (s / k); },
      [&](unsigned s, unsigned c) { pathsIn[c] &= ~(1u << (s / k)); },
      [&](const std::vector<unsigned>& cls, unsigned classes) {
        std::vector<std::vector<unsigned>> paths(r);
        for (unsigned i = 0; i < r; ++i)
          for (unsigned j = 0; j < k; ++j) paths[i].push_back(cls[i * k + j]);
        auto edges = pathEdges(paths);
        if (!acyclic(classes, edges)) return;
        fam.members.push_back({AcyclicDigraph(classes, std::move(edges)), std::move(paths)});
      });
  return fam;
}

FusedPathFamily familyF(unsigned k, unsigned r) {
  FusedPathFamily fam;
  const unsigned items = 1 + r * (k - 1);
  // Item 0 is rho; ray i owns items 1 + i(k-1) .. (i+1)(k-1), sink last.
  auto rayOf = [&](unsigned item) { return (item - 1) / (k - 1); };
  auto isSink = [&](unsigned item) { return item > 0 && (item - 1) % (k - 1) == k - 2; };
  std::vector<std::uint32_t> raysIn(items, 0);
  std::vector<unsigned> sinksIn(items, 0);
  forEachPartition(
      items,
      [&](unsigned item, unsigned c) {
        if (item == 0) return true;
        if ((raysIn[c] >> rayOf(item)) & 1u) return false;
        return !(isSink(item) && sinksIn[c]);
      },
      [&](unsigned item, unsigned c) {
        if (item == 0) return;
        raysIn[c] |= 1u << rayOf(item);
        sinksIn[c] += isSink(item);
      },
      [&](unsigned item, unsigned c) {
        if (item == 0) return;
        raysIn[c] &= ~(1u << rayOf(item));
        sinksIn[c] -= isSink(item);
      },
      [&](const std::vector<unsigned>& cls, unsigned classes) {
        const unsigned rho = cls[0];  // always class 0
        std::vector<std::vector<unsigned>> chains(r);
        std::vector<unsigned> open;  // rays needing a gap for rho
        for (unsigned i = 0; i < r; ++i) {
          for (unsigned j = 0; j + 1 < k; ++j) chains[i].push_back(cls[1 + i * (k - 1) + j]);
          if (std::find(chains[i].begin(), chains[i].end(), rho) == chains[i].end()) open.push_back(i);
        }
        std::vector<unsigned> gap(open.size(), 0);
        while (true) {
          auto paths = chains;
          for (std::size_t o = 0; o < open.size(); ++o)
            paths[open[o]].insert(paths[open[o]].begin() + gap[o], rho);
          auto edges = pathEdges(paths);
          if (acyclic(classes, edges))
            fam.members.push_back({AcyclicDigraph(classes, std::move(edges)), std::move(paths)});
          std::size_t pos = 0;
          while (pos < gap.size() && ++gap[pos] == k - 1) gap[pos++] = 0;
          if (pos == gap.size()) break;
        }
      });
  return fam;
}

}  // namespace

FusedPathFamily enumerateFusedPaths(unsigned k, unsigned r, FusedVariant variant) {
  if (k < 1 || r < 1) throw std::invalid_argument("fused paths need k >= 1 and r >= 1");
  if (variant == FusedVariant::FamilyF && k < 2) throw std::invalid_argument("family F needs k >= 2");
  if (k * r > kFusedSlotCap)
    throw InfeasibleError("fused-path enumeration is limited to k*r <= " + std::to_string(kFusedSlotCap) +
                          ", got " + std::to_string(k * r));
  FusedPathFamily fam = variant == FusedVariant::FamilyF ? familyF(k, r) : labelledFamily(k, r);
  fam.k = k;
  fam.r = r;
  fam.variant = variant;
  if (variant == FusedVariant::ConnectedOnly) {
    std::erase_if(fam.members, [](const FusedGraph& g) { return !g.graph.isWeaklyConnected(); });
  } else if (variant == FusedVariant::Unlabelled) {
    std::map<std::string, std::size_t> seen;
    std::vector<FusedGraph> kept;
    for (auto& m : fam.members)
      if (seen.emplace(canonicalForm(m.graph), kept.size()).second) kept.push_back(std::move(m));
    fam.members = std::move(kept);
  }
  return fam;
}

FusedVariant parseFusedVariant(const std::string& name) {
  if (name == "labelled") return FusedVariant::Labelled;
  if (name == "unlabelled") return FusedVariant::Unlabelled;
  if (name == "connected") return FusedVariant::ConnectedOnly;
  if (name == "family-f") return FusedVariant::FamilyF;
  throw std::invalid_argument("unknown fused-path variant '" + name +
                              "' (expected labelled, unlabelled, connected or family-f)");
}

std::string toString(FusedVariant v) {
  switch (v) {
    case FusedVariant::Labelled: return "labelled";
    case FusedVariant::Unlabelled: return "unlabelled";
    case FusedVariant::ConnectedOnly: return "connected";
    case FusedVariant::FamilyF: return "family-f";
  }
  return "?";
}

std::string canonicalForm(const AcyclicDigraph& g) {
  const unsigned n = g.vertexCount();
  std::vector<std::vector<unsigned char>> mult(n, std::vector<unsigned char>(n, 0));
  for (const auto& [u, v] : g.edges()) ++mult[u][v];
  std::vector<unsigned> level(n, 0), rise(n, 0);
  for (unsigned v : g.topologicalOrder())
    for (unsigned w : g.successors(v)) level[w] = std::max(level[w], level[v] + 1);
  const auto& topo = g.topologicalOrder();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it)
    for (unsigned w : g.successors(*it)) rise[*it] = std::max(rise[*it], rise[w] + 1);
  using Key = std::tuple<unsigned, unsigned, std::size_t, std::size_t, int, int>;
  std::vector<Key> key(n);
  for (unsigned v = 0; v < n; ++v)
    key[v] = {level[v], rise[v], g.predecessors(v).size(), g.successors(v).size(),
              std::popcount(g.ancestors(v)), std::popcount(g.descendants(v))};
  std::vector<unsigned> order(n);
  for (unsigned v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](unsigned a, unsigned b) { return key[a] < key[b]; });
  // Class boundaries in `order`.
  std::vector<std::pair<unsigned, unsigned>> groups;
  double cases = 1;
  for (unsigned i = 0; i < n;) {
    unsigned j = i;
    while (j < n && key[order[j]] == key[order[i]]) ++j;
    groups.emplace_back(i, j);
    for (unsigned f = 2; f <= j - i; ++f) cases *= f;
    i = j;
  }
  if (cases > 1e7) throw InfeasibleError("canonical form would try more than 1e7 relabellings");
  for (auto [b, e] : groups) std::sort(order.begin() + b, order.begin() + e);
  std::string best, code(n * n, 0);
  while (true) {
    for (unsigned p = 0; p < n; ++p)
      for (unsigned q = 0; q < n; ++q) code[p * n + q] = static_cast<char>(mult[order[p]][order[q]]);
    if (best.empty() || code < best) best = code;
    std::size_t gi = 0;
    while (gi < groups.size() &&
           !std::next_permutation(order.begin() + groups[gi].first, order.begin() + groups[gi].second))
      ++gi;
    if (gi == groups.size()) break;
  }
  std::string out = std::to_string(n) + ":";
  for (char c : best) out += static_cast<char>('0' + c);
  return out;
}

bool isomorphic(const AcyclicDigraph& a, const AcyclicDigraph& b) {
  return a.vertexCount() == b.vertexCount() && a.edges().size() == b.edges().size() &&
         canonicalForm(a) == canonicalForm(b);
}

}  // namespace treepat
