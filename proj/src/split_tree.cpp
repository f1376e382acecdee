#include "treepat/split_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>

namespace treepat {

// ---------------------------------------------------------------------------
// SplitDistribution

SplitDistribution SplitDistribution::bst() { return {}; }

SplitDistribution SplitDistribution::dirichlet(double a, unsigned b) {
  if (!(a > 0) || !std::isfinite(a))
    throw std::invalid_argument("dirichlet shape must be positive and finite");
  if (b < 2) throw std::invalid_argument("dirichlet split needs b >= 2");
  SplitDistribution d;
  d.kind_ = Kind::Dirichlet;
  d.length_ = b;
  d.shape_ = a;
  return d;
}

SplitDistribution SplitDistribution::fixed(std::vector<Rational> probabilities) {
  if (probabilities.size() < 2) throw std::invalid_argument("fixed split needs at least 2 components");
  Rational total = 0;
  for (const auto& p : probabilities) {
    if (p < 0) throw std::invalid_argument("fixed split has a negative component");
    total += p;
  }
  if (total != 1) throw std::invalid_argument("fixed split components sum to " + toString(total) + ", not 1");
  SplitDistribution d;
  d.kind_ = Kind::Fixed;
  d.length_ = static_cast<unsigned>(probabilities.size());
  d.fixed_ = std::move(probabilities);
  return d;
}

SplitDistribution SplitDistribution::parse(const std::string& text, unsigned b) {
  if (text == "bst") return bst();
  if (text.rfind("dirichlet:", 0) == 0) return dirichlet(std::stod(text.substr(10)), b);
  if (text.rfind("fixed:", 0) == 0) {
    std::vector<Rational> ps;
    std::stringstream in(text.substr(6));
    std::string item;
    while (std::getline(in, item, ',')) ps.push_back(parseRational(item));
    return fixed(std::move(ps));
  }
  throw std::invalid_argument("unknown split distribution '" + text +
                              "' (expected bst, dirichlet:<a> or fixed:<p1,...>)");
}

std::string SplitDistribution::name() const {
  switch (kind_) {
    case Kind::Bst:
      return "bst";
    case Kind::Dirichlet: {
      std::ostringstream out;
      out.precision(17);
      out << "dirichlet:" << shape_;
      return out.str();
    }
    case Kind::Fixed: {
      std::string s = "fixed:";
      for (std::size_t i = 0; i < fixed_.size(); ++i) s += (i ? "," : "") + toString(fixed_[i]);
      return s;
    }
  }
  return {};
}

void SplitDistribution::sample(SplitMix64& rng, std::span<double> out) const {
  switch (kind_) {
    case Kind::Bst: {
      const double u = rng.uniform();
      out[0] = u;
      out[1] = 1.0 - u;
      return;
    }
    case Kind::Dirichlet: {
      std::gamma_distribution<double> gamma(shape_, 1.0);
      double total = 0;
      for (double& x : out) total += (x = gamma(rng));
      if (total <= 0) {
        // Every gamma draw underflowed (tiny shapes); fall back to a vertex.
        std::fill(out.begin(), out.end(), 0.0);
        out[rng.below(out.size())] = 1.0;
        return;
      }
      for (double& x : out) x /= total;
      return;
    }
    case Kind::Fixed: {
      std::vector<std::size_t> perm(fixed_.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = fixed_[perm[i]].get_d();
      return;
    }
  }
}

void SplitParams::validate() const {
  if (b < 2) throw std::invalid_argument("split parameters: need b >= 2");
  if (s == 0) throw std::invalid_argument("split parameters: need s > 0");
  if (s0 == 0) throw std::invalid_argument("split parameters: need s0 >= 1 so internal bags hold balls");
  if (s0 > s) throw std::invalid_argument("split parameters: need s0 <= s");
  if (static_cast<std::uint64_t>(b) * s1 > static_cast<std::uint64_t>(s) + 1 - s0)
    throw std::invalid_argument("split parameters: need b*s1 <= s+1-s0");
  if (distribution.length() != b)
    throw std::invalid_argument("split distribution has " + std::to_string(distribution.length()) +
                                " components but b = " + std::to_string(b));
  if (distribution.kind() == SplitDistribution::Kind::Fixed) {
    for (const auto& p : distribution.fixedProbabilities())
      if (p == 1) throw std::invalid_argument("split distribution has P(V_i = 1) = 1");
  }
}

// ---------------------------------------------------------------------------
// SplitTree

SplitTree::SplitTree(RootedTree tree, std::vector<std::vector<BallId>> bags, SplitParams params,
                     std::uint64_t seed)
    : tree_(std::move(tree)), bags_(std::move(bags)), params_(std::move(params)), seed_(seed) {
  if (bags_.size() != tree_.size())
    throw std::invalid_argument("split tree: one bag per node required");
  std::size_t n = 0;
  for (const auto& bag : bags_) n += bag.size();
  ballNode_.assign(n, kNoNode);
  for (NodeId v = 0; v < bags_.size(); ++v) {
    for (BallId j : bags_[v]) {
      if (j == 0 || j > n) throw std::invalid_argument("split tree: ball id " + std::to_string(j) + " out of range");
      if (ballNode_[j - 1] != kNoNode)
        throw std::invalid_argument("split tree: ball " + std::to_string(j) + " appears twice");
      ballNode_[j - 1] = v;
    }
  }
}

NodeId SplitTree::nodeOf(BallId ball) const {
  if (ball == 0 || ball > ballNode_.size())
    throw std::invalid_argument("unknown ball id " + std::to_string(ball));
  return ballNode_[ball - 1];
}

bool SplitTree::ballLess(BallId j1, BallId j2) const {
  return tree_.isAncestor(nodeOf(j1), nodeOf(j2));
}

bool SplitTree::incomparable(BallId j1, BallId j2) const {
  const NodeId a = nodeOf(j1), b = nodeOf(j2);
  return a == b || (!tree_.isAncestor(a, b) && !tree_.isAncestor(b, a));
}

namespace {

/// Lazily grown nodes of the infinite b-ary tree. Every node owns a random
/// stream keyed by its position, so draws do not depend on creation order.
struct ProtoTree {
  struct Node {
    std::uint64_t key;
    SplitMix64 rng;
    std::vector<BallId> balls;
    bool internal = false;
  };

  const SplitParams& params;
  std::uint64_t seed;
  std::vector<Node> nodes;
  std::vector<std::uint32_t> childSlot;  // b slots per node, kNoNode if absent
  std::vector<double> split;              // b entries per node

  ProtoTree(const SplitParams& p, std::uint64_t s) : params(p), seed(s) { create(1); }

  std::uint32_t create(std::uint64_t key) {
    const auto id = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back({key, SplitMix64(deriveSeed(seed, key)), {}, false});
    childSlot.resize(childSlot.size() + params.b, kNoNode);
    split.resize(split.size() + params.b);
    params.distribution.sample(nodes[id].rng, std::span(split).subspan(std::size_t{id} * params.b, params.b));
    return id;
  }

  std::uint32_t child(std::uint32_t u, unsigned i) {
    std::uint32_t c = childSlot[std::size_t{u} * params.b + i];
    if (c == kNoNode) {
      c = create(mix64(nodes[u].key * 0x100000001b3ULL + i + 1));
      childSlot[std::size_t{u} * params.b + i] = c;
    }
    return c;
  }

  unsigned pickChild(std::uint32_t u) {
    const double x = nodes[u].rng.uniform();
    const double* v = &split[std::size_t{u} * params.b];
    double acc = 0;
    unsigned last = 0;
    for (unsigned i = 0; i < params.b; ++i) {
      if (v[i] > 0) last = i;
      acc += v[i];
      if (x < acc) return i;
    }
    return last;
  }

  /// Redistributes an over-full bag; repeats on children that overflow.
  void splitNode(std::uint32_t start) {
    std::vector<std::uint32_t> work{start};
    while (!work.empty()) {
      const std::uint32_t u = work.back();
      work.pop_back();
      std::vector<BallId> balls = std::move(nodes[u].balls);
      std::shuffle(balls.begin(), balls.end(), nodes[u].rng);
      nodes[u].balls.assign(balls.begin(), balls.begin() + params.s0);
      nodes[u].internal = true;
      std::size_t next = params.s0;
      for (unsigned i = 0; i < params.b; ++i)
        for (unsigned k = 0; k < params.s1; ++k) {
          const std::uint32_t c = child(u, i);
          nodes[c].balls.push_back(balls[next++]);
        }
      for (; next < balls.size(); ++next) {
        const std::uint32_t c = child(u, pickChild(u));
        nodes[c].balls.push_back(balls[next]);
      }
      for (unsigned i = 0; i < params.b; ++i) {
        const std::uint32_t c = childSlot[std::size_t{u} * params.b + i];
        if (c != kNoNode && nodes[c].balls.size() > params.s) work.push_back(c);
      }
    }
  }

  void insert(BallId j) {
    std::uint32_t u = 0;
    while (nodes[u].internal) u = child(u, pickChild(u));
    nodes[u].balls.push_back(j);
    if (nodes[u].balls.size() > params.s) splitNode(u);
  }

  /// Prunes ball-less subtrees and renumbers breadth-first from the root.
  std::pair<RootedTree, std::vector<std::vector<BallId>>> finish() {
    std::vector<std::uint64_t> load(nodes.size(), 0);
    // Children are always created after their parent, so a reverse sweep
    // accumulates subtree loads.
    std::vector<std::uint32_t> parentOf(nodes.size(), kNoNode);
    for (std::uint32_t u = 0; u < nodes.size(); ++u)
      for (unsigned i = 0; i < params.b; ++i) {
        const std::uint32_t c = childSlot[std::size_t{u} * params.b + i];
        if (c != kNoNode) parentOf[c] = u;
      }
    for (std::uint32_t u = static_cast<std::uint32_t>(nodes.size()); u-- > 0;) {
      load[u] += nodes[u].balls.size();
      if (parentOf[u] != kNoNode) load[parentOf[u]] += load[u];
    }
    std::vector<NodeId> parents;
    std::vector<std::vector<BallId>> bags;
    std::deque<std::pair<std::uint32_t, NodeId>> queue{{0, kNoNode}};
    while (!queue.empty()) {
      const auto [u, p] = queue.front();
      queue.pop_front();
      const auto id = static_cast<NodeId>(parents.size());
      parents.push_back(p);
      bags.push_back(std::move(nodes[u].balls));
      for (unsigned i = 0; i < params.b; ++i) {
        const std::uint32_t c = childSlot[std::size_t{u} * params.b + i];
        if (c != kNoNode && load[c] > 0) queue.emplace_back(c, id);
      }
    }
    return {RootedTree::fromParents(std::move(parents)), std::move(bags)};
  }
};

void checkRequest(const SplitParams& params, std::size_t n) {
  params.validate();
  if (n == 0) throw std::invalid_argument("split tree needs n >= 1 balls");
  if (n >= kNoNode) throw std::invalid_argument("split tree ball count exceeds the 32-bit id type");
}

}  // namespace

SplitTree generateTrickleDown(const SplitParams& params, std::size_t n, std::uint64_t seed) {
  checkRequest(params, n);
  ProtoTree proto(params, seed);
  for (std::size_t j = 1; j <= n; ++j) proto.insert(static_cast<BallId>(j));
  auto [tree, bags] = proto.finish();
  return SplitTree(std::move(tree), std::move(bags), params, seed);
}

SplitTree generateMultinomial(const SplitParams& params, std::size_t n, std::uint64_t seed) {
  checkRequest(params, n);
  struct Pending {
    std::uint64_t key;
    std::uint64_t size;
    NodeId parent;
  };
  std::vector<NodeId> parents;
  std::vector<std::uint64_t> bagSizes;
  std::deque<Pending> queue{{1, n, kNoNode}};
  std::vector<double> v(params.b);
  while (!queue.empty()) {
    const Pending cur = queue.front();
    queue.pop_front();
    const auto id = static_cast<NodeId>(parents.size());
    parents.push_back(cur.parent);
    if (cur.size <= params.s) {
      bagSizes.push_back(cur.size);
      continue;
    }
    bagSizes.push_back(params.s0);
    SplitMix64 rng(deriveSeed(seed, cur.key));
    params.distribution.sample(rng, v);
    const std::uint64_t forced = params.s0 + std::uint64_t{params.b} * params.s1;
    if (cur.size < forced) throw std::logic_error("multinomial split: subtree smaller than s0 + b*s1");
    std::uint64_t remaining = cur.size - forced;
    double mass = 1.0;
    for (unsigned i = 0; i < params.b; ++i) {
      std::uint64_t x = remaining;
      if (i + 1 < params.b) {
        const double p = mass > 0 ? std::clamp(v[i] / mass, 0.0, 1.0) : 0.0;
        x = remaining == 0 ? 0 : std::binomial_distribution<std::uint64_t>(remaining, p)(rng);
        mass -= v[i];
      }
      remaining -= x;
      const std::uint64_t childSize = x + params.s1;
      if (childSize > 0) queue.push_back({mix64(cur.key * 0x100000001b3ULL + i + 1), childSize, id});
    }
  }
  std::vector<BallId> ids(n);
  std::iota(ids.begin(), ids.end(), BallId{1});
  SplitMix64 rng(deriveSeed(seed, 0xba11ULL));
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<std::vector<BallId>> bags(parents.size());
  std::size_t next = 0;
  for (std::size_t u = 0; u < bags.size(); ++u)
    for (std::uint64_t k = 0; k < bagSizes[u]; ++k) bags[u].push_back(ids[next++]);
  return SplitTree(RootedTree::fromParents(std::move(parents)), std::move(bags), params, seed);
}

std::uint64_t ballAncestorCount(const SplitTree& t, BallId ball) {
  return static_cast<std::uint64_t>(t.tree().depth(t.nodeOf(ball))) + 1;
}

std::uint64_t ballCommonAncestors(const SplitTree& t, std::span<const BallId> balls) {
  if (balls.empty()) throw std::invalid_argument("ballCommonAncestors needs at least one ball");
  std::vector<NodeId> nodes;
  nodes.reserve(balls.size());
  for (BallId j : balls) nodes.push_back(t.nodeOf(j));
  return t.tree().commonAncestors(nodes).commonAncestorCount;
}

SameChildBound sameChildProbabilityBound(const SplitParams& params) {
  const auto& d = params.distribution;
  SameChildBound out;
  switch (d.kind()) {
    case SplitDistribution::Kind::Bst:
      out.exact = Rational(2, 3);
      break;
    case SplitDistribution::Kind::Dirichlet: {
      // E[V_i^2] = a(a+1) / (ba(ba+1)); summing over i gives (a+1)/(ba+1).
      const Rational a(d.dirichletShape());
      out.exact = Rational(a + 1) / Rational(a * d.length() + 1);
      break;
    }
    case SplitDistribution::Kind::Fixed: {
      Rational sum = 0;
      for (const auto& p : d.fixedProbabilities()) sum += p * p;
      out.exact = sum;
      break;
    }
  }
  out.exact->canonicalize();
  out.value = out.exact->get_d();
  return out;
}

SameChildBound sameChildProbabilityMonteCarlo(const SplitParams& params, std::size_t samples,
                                              std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("Monte Carlo bound needs at least 2 samples");
  SplitMix64 rng(deriveSeed(seed, 0x5a3eULL));
  std::vector<double> v(params.b);
  double mean = 0, m2 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    params.distribution.sample(rng, v);
    double x = 0;
    for (double vi : v) x += vi * vi;
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  SameChildBound out;
  out.value = mean;
  out.standardError = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return out;
}

double splitEntropyMu(const SplitParams& params) {
  const auto& d = params.distribution;
  switch (d.kind()) {
    case SplitDistribution::Kind::Bst:
      return -0.5;  // 2 * int_0^1 u ln u du
    case SplitDistribution::Kind::Dirichlet: {
      // V_i ~ Beta(a, (b-1)a): E[V ln V] = E[V] (psi(a+1) - psi(ba+1)).
      const double a = d.dirichletShape();
      return boost::math::digamma(a + 1) - boost::math::digamma(a * d.length() + 1);
    }
    case SplitDistribution::Kind::Fixed: {
      double mu = 0;
      for (const auto& p : d.fixedProbabilities()) {
        const double x = p.get_d();
        if (x > 0) mu += x * std::log(x);
      }
      return mu;
    }
  }
  return 0;
}

}  // namespace treepat
