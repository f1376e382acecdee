#include "treepat/embedding.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treepat/errors.hpp"

namespace treepat {

namespace {

struct Overflow {};

// Exact 128-bit arithmetic that bails out on overflow; the DP then reruns
// with big integers.
struct CheckedOps {
  using T = unsigned __int128;
  static T from(std::uint64_t x) { return x; }
  static T add(T a, T b) {
    T out;
    if (__builtin_add_overflow(a, b, &out)) throw Overflow{};
    return out;
  }
  static T mul(T a, T b) {
    T out;
    if (__builtin_mul_overflow(a, b, &out)) throw Overflow{};
    return out;
  }
  static BigInt big(T x) {
    BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(x >> 64));
    BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(x));
    return (hi << 64) + lo;
  }
};

struct BigOps {
  using T = BigInt;
  static T from(std::uint64_t x) { return BigInt(static_cast<unsigned long>(x)); }
  static T add(const T& a, const T& b) { return a + b; }
  static T mul(const T& a, const T& b) { return a * b; }
  static BigInt big(const T& x) { return x; }
};

// Successor-closed vertex sets and the moves between them.
struct ClosedSets {
  std::vector<std::uint32_t> masks;
  std::vector<int> index;  // by mask, -1 when not closed
  // For each closed T: (U, T \ U) with both closed.
  std::vector<std::vector<std::pair<int, int>>> splits;
  // For each closed S: (|A|, S \ A) for sources A of S with |A| <= maxBag.
  std::vector<std::vector<std::pair<unsigned, int>>> placements;

  ClosedSets(const AcyclicDigraph& g, std::uint64_t maxBag) {
    const unsigned n = g.vertexCount();
    index.assign(std::size_t{1} << n, -1);
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
      bool closed = true;
      for (std::uint32_t rest = m; rest && closed; rest &= rest - 1) {
        unsigned v = static_cast<unsigned>(std::countr_zero(rest));
        closed = (g.descendants(v) & ~static_cast<std::uint64_t>(m)) == 0;
      }
      if (closed) {
        index[m] = static_cast<int>(masks.size());
        masks.push_back(m);
      }
    }
    splits.resize(masks.size());
    placements.resize(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) {
      const std::uint32_t t = masks[i];
      // Submasks of t, including the empty set and t itself.
      for (std::uint32_t u = t;; u = (u - 1) & t) {
        if (index[u] >= 0 && index[t & ~u] >= 0) splits[i].emplace_back(index[u], index[t & ~u]);
        if (u == 0) break;
      }
      std::uint32_t sources = 0;
      for (std::uint32_t rest = t; rest; rest &= rest - 1) {
        unsigned v = static_cast<unsigned>(std::countr_zero(rest));
        if ((g.ancestors(v) & t) == 0) sources |= std::uint32_t{1} << v;
      }
      for (std::uint32_t a = sources;; a = (a - 1) & sources) {
        const unsigned size = static_cast<unsigned>(std::popcount(a));
        if (size <= maxBag) placements[i].emplace_back(size, index[t & ~a]);
        if (a == 0) break;
      }
    }
  }
};

template <class Ops>
BigInt runEmbeddingDp(const AcyclicDigraph& g, const ElementPoset& t, const ClosedSets& sets) {
  using T = typename Ops::T;
  const RootedTree& tree = t.tree();
  const std::size_t d = sets.masks.size();
  const unsigned nv = g.vertexCount();
  std::vector<std::vector<T>> table(tree.size());
  std::vector<T> acc(d), next(d);
  std::vector<T> falling(nv + 1);
  const auto& order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId x = *it;
    std::fill(acc.begin(), acc.end(), Ops::from(0));
    acc[0] = Ops::from(1);  // masks[0] is the empty set
    for (NodeId c : tree.children(x)) {
      const auto& child = table[c];
      for (std::size_t i = 0; i < d; ++i) {
        T sum = Ops::from(0);
        for (const auto& [u, rest] : sets.splits[i])
          if (acc[rest] != 0 && child[u] != 0) sum = Ops::add(sum, Ops::mul(acc[rest], child[u]));
        next[i] = sum;
      }
      std::swap(acc, next);
      std::vector<T>().swap(table[c]);
    }
    const std::uint64_t bag = t.bagSize(x);
    falling[0] = Ops::from(1);
    for (unsigned a = 1; a <= nv; ++a)
      falling[a] = a <= bag ? Ops::mul(falling[a - 1], Ops::from(bag - a + 1)) : Ops::from(0);
    auto& mine = table[x];
    mine.assign(d, Ops::from(0));
    for (std::size_t i = 0; i < d; ++i) {
      T sum = Ops::from(0);
      for (const auto& [size, rest] : sets.placements[i])
        if (acc[rest] != 0) sum = Ops::add(sum, Ops::mul(falling[size], acc[rest]));
      mine[i] = sum;
    }
  }
  const int all = sets.index[(std::size_t{1} << nv) - 1];
  return Ops::big(table[tree.root()][all]);
}

void checkVertexCap(const AcyclicDigraph& g) {
  if (g.vertexCount() > kEmbeddingVertexCap)
    throw InfeasibleError("embedding count supports at most " + std::to_string(kEmbeddingVertexCap) +
                          " digraph vertices, got " + std::to_string(g.vertexCount()));
}

}  // namespace

BigInt embeddingCount(const AcyclicDigraph& g, const ElementPoset& t) {
  checkVertexCap(g);
  if (g.vertexCount() == 0) return 1;
  std::uint64_t maxBag = 0;
  for (NodeId v = 0; v < t.tree().size(); ++v) maxBag = std::max(maxBag, t.bagSize(v));
  const ClosedSets sets(g, maxBag);
  try {
    return runEmbeddingDp<CheckedOps>(g, t, sets);
  } catch (const Overflow&) {
    return runEmbeddingDp<BigOps>(g, t, sets);
  }
}

BigInt embeddingCountBacktrack(const AcyclicDigraph& g, const ElementPoset& t) {
  checkVertexCap(g);
  const auto& order = g.topologicalOrder();
  const unsigned nv = g.vertexCount();
  if (nv == 0) return 1;
  const std::size_t n = t.size();
  std::vector<std::size_t> image(nv);
  std::vector<char> used(n, 0);
  BigInt total = 0;
  std::function<std::uint64_t(unsigned)> place = [&](unsigned pos) -> std::uint64_t {
    const unsigned v = order[pos];
    std::uint64_t count = 0;
    for (std::size_t e = 0; e < n; ++e) {
      if (used[e]) continue;
      bool ok = true;
      for (unsigned p : g.predecessors(v))
        if (!t.less(image[p], e)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (pos + 1 == nv) {
        ++count;
        continue;
      }
      used[e] = 1;
      image[v] = e;
      count += place(pos + 1);
      used[e] = 0;
    }
    return count;
  };
  return BigInt(static_cast<unsigned long>(place(0)));
}

namespace {

void checkStarRequest(const RootedTree& t, unsigned k, unsigned r) {
  if (k < 2 || r < 1) throw std::invalid_argument("star count needs k >= 2 and r >= 1");
  if (r > 8) throw std::invalid_argument("star count supports r <= 8");
  if (std::pow(static_cast<double>(t.size()), static_cast<double>(r)) > 1e9)
    throw InfeasibleError("star count enumerates n^r = " + std::to_string(t.size()) + "^" + std::to_string(r) +
                          " sink tuples, above the limit of 1e9");
}

// Calls visit(u) for every ordered tuple of distinct nodes.
template <class F>
void forDistinctTuples(std::size_t n, unsigned r, F&& visit) {
  if (n < r) return;
  std::vector<NodeId> u(r, 0);
  while (true) {
    bool distinct = true;
    for (unsigned i = 0; i < r && distinct; ++i)
      for (unsigned j = 0; j < i && distinct; ++j) distinct = u[i] != u[j];
    if (distinct) visit(u);
    unsigned pos = 0;
    while (pos < r && ++u[pos] == n) u[pos++] = 0;
    if (pos == r) return;
  }
}

// Deepest admissible root image: the LCA, or its parent when the LCA is
// itself one of the sinks.
std::optional<NodeId> lowestRoot(const RootedTree& t, const std::vector<NodeId>& u) {
  const NodeId l = t.commonAncestors(u).lca;
  for (NodeId x : u)
    if (x == l) return t.parent(l);
  return l;
}

// Ways for every ray to take `need` interior nodes, disjointly, where
// count[m] nodes lie on exactly the rays in bitmask m.
BigInt disjointChoices(std::vector<std::uint64_t> count, unsigned r, unsigned need) {
  if (need == 0) return 1;
  std::vector<std::vector<unsigned>> classesOf(r);
  for (unsigned m = 1; m < count.size(); ++m)
    if (count[m])
      for (unsigned i = 0; i < r; ++i)
        if ((m >> i) & 1u) classesOf[i].push_back(m);
  std::function<BigInt(unsigned, std::size_t, unsigned)> go = [&](unsigned ray, std::size_t slot,
                                                                  unsigned left) -> BigInt {
    if (ray == r) return 1;
    const auto& classes = classesOf[ray];
    if (slot == classes.size()) return left == 0 ? go(ray + 1, 0, need) : BigInt(0);
    const unsigned m = classes[slot];
    BigInt total = 0;
    const std::uint64_t avail = count[m];
    for (unsigned x = 0; x <= left && x <= avail; ++x) {
      count[m] -= x;
      BigInt rest = go(ray, slot + 1, left - x);
      count[m] += x;
      if (rest != 0) total += binomial(static_cast<long>(avail), x) * rest;
    }
    return total;
  };
  return go(0, 0, need);
}

}  // namespace

BigInt starCountFormula(const RootedTree& t, unsigned k, unsigned r) {
  checkStarRequest(t, k, r);
  const unsigned full = (1u << r) - 1;
  BigInt total = 0;
  std::vector<std::uint64_t> count(full + 1);
  std::vector<std::pair<NodeId, unsigned>> marks;
  forDistinctTuples(t.size(), r, [&](const std::vector<NodeId>& u) {
    const auto rho0 = lowestRoot(t, u);
    if (!rho0) return;
    std::fill(count.begin(), count.end(), 0);
    if (k > 2) {
      marks.clear();
      for (unsigned i = 0; i < r; ++i)
        for (NodeId v = *t.parent(u[i]); v != *rho0; v = *t.parent(v)) {
          bool sink = false;
          for (NodeId x : u) sink |= x == v;
          if (sink) continue;
          auto it = std::find_if(marks.begin(), marks.end(), [&](const auto& m) { return m.first == v; });
          if (it == marks.end()) marks.emplace_back(v, 1u << i);
          else it->second |= 1u << i;
        }
      for (const auto& [v, m] : marks) ++count[m];
    }
    std::optional<NodeId> rho = rho0;
    while (rho) {
      total += disjointChoices(count, r, k - 2);
      ++count[full];
      rho = t.parent(*rho);
    }
  });
  return total;
}

BigInt starCountApprox(const RootedTree& t, unsigned k, unsigned r) {
  checkStarRequest(t, k, r);
  BigInt total = 0;
  forDistinctTuples(t.size(), r, [&](const std::vector<NodeId>& u) {
    for (auto rho = lowestRoot(t, u); rho; rho = t.parent(*rho)) {
      BigInt term = 1;
      for (NodeId x : u) term *= binomial(static_cast<long>(t.depth(x)) - t.depth(*rho) - 1, static_cast<long>(k) - 2);
      total += term;
    }
  });
  return total;
}

}  // namespace treepat
