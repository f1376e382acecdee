#include "treepat/tree_params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "treepat/errors.hpp"

namespace treepat {

void UpsilonSpec::validate() const {
  if (r < 1) throw std::invalid_argument("upsilon needs r >= 1");
  if (k < 2) throw std::invalid_argument("upsilon needs k >= 2, got " + std::to_string(k));
}

namespace {

// C(d, k-2) for every depth that occurs.
std::vector<BigInt> depthWeights(const RootedTree& t, unsigned k) {
  std::vector<BigInt> w(t.height() + 1);
  for (std::uint32_t d = 0; d <= t.height(); ++d) w[d] = binomial(d, static_cast<long>(k) - 2);
  return w;
}

// Postorder accumulation of per-subtree sums of weight^j for j = 1..powers.
std::vector<std::vector<BigInt>> subtreePowerSums(const ElementPoset& t, unsigned k, unsigned powers) {
  const RootedTree& tree = t.tree();
  const auto w = depthWeights(tree, k);
  std::vector<std::vector<BigInt>> p(tree.size(), std::vector<BigInt>(powers + 1, 0));
  const auto& order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    const BigInt& wv = w[tree.depth(v)];
    const unsigned long bag = t.bagSize(v);
    BigInt term = bag;
    for (unsigned j = 1; j <= powers; ++j) {
      term *= wv;
      p[v][j] += term;
    }
    if (auto parent = tree.parent(v))
      for (unsigned j = 1; j <= powers; ++j) p[*parent][j] += p[v][j];
  }
  return p;
}

}  // namespace

BigInt upsilon(const ElementPoset& t, const UpsilonSpec& spec) {
  spec.validate();
  const unsigned r = spec.r;
  BigInt total = 0;
  if (spec.mode == TupleMode::WithRepetition) {
    const auto p = subtreePowerSums(t, spec.k, 1);
    BigInt power;
    for (const auto& sums : p) {
      mpz_pow_ui(power.get_mpz_t(), sums[1].get_mpz_t(), r);
      total += power;
    }
    return total;
  }
  const auto p = subtreePowerSums(t, spec.k, r);
  std::vector<BigInt> e(r + 1);
  for (const auto& sums : p) {
    // Newton: m e_m = sum_{i=1}^m (-1)^{i-1} e_{m-i} p_i.
    e[0] = 1;
    for (unsigned m = 1; m <= r; ++m) {
      BigInt acc = 0;
      for (unsigned i = 1; i <= m; ++i) {
        if (i % 2) acc += e[m - i] * sums[i];
        else acc -= e[m - i] * sums[i];
      }
      e[m] = acc / m;
    }
    total += e[r];
  }
  return total * factorial(r);
}

BigInt upsilonNaive(const ElementPoset& t, const UpsilonSpec& spec) {
  spec.validate();
  const std::size_t n = t.size();
  const unsigned r = spec.r;
  if (std::pow(static_cast<double>(n), static_cast<double>(r)) > kNaiveTupleCap)
    throw InfeasibleError("naive upsilon enumerates n^r = " + std::to_string(n) + "^" + std::to_string(r) +
                          " tuples, above the limit of 1e9");
  const RootedTree& tree = t.tree();
  const auto w = depthWeights(tree, spec.k);
  std::vector<std::size_t> idx(r, 0);
  std::vector<NodeId> nodes(r);
  BigInt total = 0;
  while (true) {
    bool distinct = true;
    for (unsigned i = 0; i < r && distinct; ++i)
      for (unsigned j = 0; j < i && distinct; ++j) distinct = idx[i] != idx[j];
    if (distinct || spec.mode == TupleMode::WithRepetition) {
      BigInt term = 1;
      for (unsigned i = 0; i < r; ++i) {
        nodes[i] = t.nodeOf(idx[i]);
        term *= w[tree.depth(nodes[i])];
      }
      if (term != 0) total += term * static_cast<unsigned long>(tree.commonAncestors(nodes).commonAncestorCount);
    }
    unsigned pos = 0;
    while (pos < r && ++idx[pos] == n) idx[pos++] = 0;
    if (pos == r) break;
  }
  return total;
}

BigInt totalPathLength(const RootedTree& t) {
  BigInt total = 0;
  for (NodeId v = 0; v < t.size(); ++v) total += static_cast<unsigned long>(t.depth(v));
  return total;
}

BigInt ancestorTail(const RootedTree& t, std::uint32_t ell) {
  if (ell < 1) throw std::invalid_argument("ancestorTail needs ell >= 1");
  BigInt total = 0;
  for (NodeId v = 0; v < t.size(); ++v) {
    if (t.depth(v) + 1 != ell) continue;
    const BigInt s = static_cast<unsigned long>(t.subtreeSize(v));
    total += s * (s - 1);
  }
  return total;
}

BigInt ancestorTailNaive(const RootedTree& t, std::uint32_t ell) {
  if (ell < 1) throw std::invalid_argument("ancestorTail needs ell >= 1");
  BigInt total = 0;
  for (NodeId a = 0; a < t.size(); ++a)
    for (NodeId b = 0; b < t.size(); ++b)
      if (a != b && t.depth(t.lca(a, b)) + 1 >= ell) ++total;
  return total;
}

}  // namespace treepat
