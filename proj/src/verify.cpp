#include "treepat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "treepat/constants.hpp"
#include "treepat/cumulants.hpp"
#include "treepat/digraph.hpp"
#include "treepat/embedding.hpp"
#include "treepat/fused_paths.hpp"
#include "treepat/random.hpp"
#include "treepat/tree_params.hpp"

namespace treepat {

bool VerifyReport::pass() const { return passed() == counted(); }

std::size_t VerifyReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const VerifyCheck& c) { return !c.informational && c.pass; }));
}

std::size_t VerifyReport::counted() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const VerifyCheck& c) { return !c.informational; }));
}

namespace {

std::string fixed(double x, int digits = 6) {
  std::ostringstream out;
  out << std::setprecision(digits) << std::fixed << x;
  return out.str();
}

template <class T>
T orDefault(T value, T fallback) {
  return value == T{} ? fallback : value;
}

RootedTree randomTree(std::size_t maxNodes, std::uint64_t seed) {
  SplitMix64 rng(deriveSeed(seed, 0x5e1ec7));
  const std::size_t n = 1 + rng.below(maxNodes);
  return makeRandomRecursiveTree(n, seed);
}

VerifyReport thm1(const VerifyConfig& c) {
  VerifyReport rep{"thm1", c.seed, {}};
  const unsigned maxR = orDefault(c.maxR, 4u);
  if (maxR < 2) throw std::invalid_argument("thm1 needs max-r >= 2");
  std::vector<std::pair<std::string, RootedTree>> trees;
  if (c.tree) {
    trees.emplace_back("tree", *c.tree);
  } else {
    const std::size_t count = orDefault<std::size_t>(c.trees, 50);
    const std::size_t maxNodes = orDefault<std::size_t>(c.maxNodes, 8);
    for (std::size_t i = 0; i < count; ++i)
      trees.emplace_back("tree " + std::to_string(i), randomTree(maxNodes, deriveSeed(c.seed, i)));
  }
  const Pattern inversion = Pattern::parse("21");
  for (const auto& [label, t] : trees) {
    const auto kappa = exactCumulants(t, inversion, maxR);
    for (unsigned r = 2; r <= maxR; ++r) {
      const Rational closed = inversionCumulantExact(t, r);
      rep.checks.push_back({label + " (n=" + std::to_string(t.size()) + ") kappa_" + std::to_string(r),
                            toString(kappa[r - 1]), toString(closed), "exact", kappa[r - 1] == closed});
    }
  }
  return rep;
}

VerifyReport table(const VerifyConfig& c) {
  VerifyReport rep{"table", c.seed, {}};
  std::map<std::tuple<unsigned, unsigned, unsigned>, Rational> computed;
  for (const auto& row : dTable(6, 5))
    for (unsigned r = 1; r <= row.values.size(); ++r) computed[{row.k, row.alpha1, r}] = row.values[r - 1];
  for (const auto& ref : referenceDTable()) {
    const auto it = computed.find({ref.k, ref.alpha1, ref.r});
    const bool found = it != computed.end();
    rep.checks.push_back({"D k=" + std::to_string(ref.k) + " alpha1=" + std::to_string(ref.alpha1) +
                              " r=" + std::to_string(ref.r),
                          found ? toString(it->second) : "missing", toString(ref.value), "exact",
                          found && it->second == ref.value});
  }
  return rep;
}

VerifyReport starIdentity(const VerifyConfig& c) {
  VerifyReport rep{"star-identity", c.seed, {}};
  const unsigned k = orDefault(c.k, 3u), r = orDefault(c.r, 2u);
  const std::size_t count = orDefault<std::size_t>(c.trees, 50);
  const std::size_t maxNodes = orDefault<std::size_t>(c.maxNodes, 30);
  const auto family = enumerateFusedPaths(k, r, FusedVariant::FamilyF);
  const AcyclicDigraph s = star(k, r);
  for (std::size_t i = 0; i < count; ++i) {
    const RootedTree t = randomTree(maxNodes, deriveSeed(c.seed, i));
    BigInt sum = 0;
    for (const auto& m : family.members) sum += embeddingCount(m.graph, t);
    const BigInt ups = upsilon(t, {r, k, TupleMode::Distinct});
    const std::string label = "tree " + std::to_string(i) + " (n=" + std::to_string(t.size()) + ")";
    rep.checks.push_back({label + " sum over F", toString(sum), toString(ups), "exact", sum == ups});
    const BigInt st = embeddingCount(s, t);
    rep.checks.push_back({label + " [S] / Upsilon", toString(st), toString(ups), "none (asymptotic)", true, true});
  }
  return rep;
}

VerifyReport embedScaling(const VerifyConfig& c) {
  VerifyReport rep{"embed-scaling", c.seed, {}};
  const unsigned lo = orDefault(c.minHeight, 6u), hi = orDefault(c.maxHeight, 12u);
  if (lo > hi || lo < 1) throw std::invalid_argument("embed-scaling needs 1 <= min-height <= max-height");
  const std::vector<std::pair<std::string, AcyclicDigraph>> graphs{
      {"path3", directedPath(3)}, {"star3,2", star(3, 2)}, {"diamond", diamond()}};
  std::vector<RootedTree> trees;
  for (unsigned h = lo; h <= hi; ++h) trees.push_back(makeCompleteBinaryTree(h));
  for (const auto& [name, g] : graphs) {
    const auto cls = classifyVertices(g);
    const auto a0 = static_cast<double>(cls.sinks.size()), a1 = static_cast<double>(cls.ancestors.size());
    double mn = INFINITY, mx = 0;
    for (std::size_t i = 0; i < trees.size(); ++i) {
      const double n = static_cast<double>(trees[i].size());
      const double ratio = toDouble(embeddingCount(g, trees[i])) / (std::pow(n, a0) * std::pow(std::log(n), a1));
      mn = std::min(mn, ratio);
      mx = std::max(mx, ratio);
      rep.checks.push_back({name + " height " + std::to_string(lo + i), fixed(ratio), "", "", true, true});
    }
    rep.checks.push_back({name + " max/min ratio", fixed(mx / mn), "< 3", "band factor 3", mx / mn < 3});
  }
  return rep;
}

SplitParams paramsOf(const VerifyConfig& c) { return c.params.value_or(SplitParams::bstPreset()); }

VerifyReport splitGoodNodes(const VerifyConfig& c) {
  VerifyReport rep{"split-good-nodes", c.seed, {}};
  const SplitParams params = paramsOf(c);
  const std::size_t n = orDefault<std::size_t>(c.n, 100000);
  const std::size_t count = orDefault<std::size_t>(c.trees, 20);
  const auto needed = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(count)));
  std::size_t good = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = deriveSeed(c.seed, i);
    const double frac = goodNodeFraction(generateTrickleDown(params, n, seed));
    const bool ok = frac >= 0.9;
    good += ok;
    rep.checks.push_back({"tree seed " + std::to_string(seed), fixed(frac), ">= 0.9", "", ok, true});
  }
  rep.checks.push_back({"trees with >= 90% good nodes", std::to_string(good) + "/" + std::to_string(count),
                        ">= " + std::to_string(needed), "", good >= needed});
  return rep;
}

VerifyReport generatorAgreement(const VerifyConfig& c) {
  VerifyReport rep{"generator-agreement", c.seed, {}};
  const SplitParams params = paramsOf(c);
  const std::size_t n = orDefault<std::size_t>(c.n, 50);
  const std::size_t count = orDefault<std::size_t>(c.trees, 10000);
  const double alpha = orDefault(c.significance, 0.01);
  std::vector<std::vector<std::uint64_t>> a, b;
  for (std::size_t i = 0; i < count; ++i) {
    a.push_back(rootChildLoads(generateTrickleDown(params, n, deriveSeed(c.seed, 2 * i))));
    b.push_back(rootChildLoads(generateMultinomial(params, n, deriveSeed(c.seed, 2 * i + 1))));
  }
  const auto res = chiSquareHomogeneity(a, b);
  rep.checks.push_back({"chi-square statistic", fixed(res.statistic), "", "df=" + std::to_string(res.degreesOfFreedom),
                        true, true});
  rep.checks.push_back({"p-value", fixed(res.pValue), ">= " + fixed(alpha, 3), "significance " + fixed(alpha, 3),
                        res.pValue >= alpha});
  return rep;
}

}  // namespace

const std::vector<std::string>& verifySuiteNames() {
  static const std::vector<std::string> names{"thm1",          "table",           "star-identity",
                                              "embed-scaling", "split-good-nodes", "generator-agreement"};
  return names;
}

VerifyReport runVerifySuite(const std::string& name, const VerifyConfig& config) {
  if (name == "thm1") return thm1(config);
  if (name == "table") return table(config);
  if (name == "star-identity") return starIdentity(config);
  if (name == "embed-scaling") return embedScaling(config);
  if (name == "split-good-nodes") return splitGoodNodes(config);
  if (name == "generator-agreement") return generatorAgreement(config);
  std::string known;
  for (const auto& s : verifySuiteNames()) known += (known.empty() ? "" : ", ") + s;
  throw std::invalid_argument("unknown verify suite '" + name + "' (known: " + known + ")");
}

double goodNodeFraction(const SplitTree& t) {
  const double n = static_cast<double>(t.ballCount());
  const double center = std::log(n) / std::abs(splitEntropyMu(t.params()));
  const double halfWidth = std::pow(std::log(n), 0.6);
  const RootedTree& tree = t.tree();
  std::size_t good = 0;
  for (NodeId v = 0; v < tree.size(); ++v)
    if (std::abs(static_cast<double>(tree.depth(v)) - center) <= halfWidth) ++good;
  return static_cast<double>(good) / static_cast<double>(tree.size());
}

ChiSquareResult chiSquareHomogeneity(const std::vector<std::vector<std::uint64_t>>& a,
                                     const std::vector<std::vector<std::uint64_t>>& b, std::uint64_t minCell) {
  if (a.empty() || b.empty()) throw std::invalid_argument("chi-square test needs two non-empty samples");
  std::map<std::vector<std::uint64_t>, std::pair<double, double>> cells;
  for (const auto& x : a) cells[x].first += 1;
  for (const auto& x : b) cells[x].second += 1;
  std::vector<std::pair<double, double>> pooled;
  std::pair<double, double> cur{0, 0};
  for (const auto& [key, counts] : cells) {
    cur.first += counts.first;
    cur.second += counts.second;
    if (cur.first + cur.second >= static_cast<double>(minCell)) {
      pooled.push_back(cur);
      cur = {0, 0};
    }
  }
  if (cur.first + cur.second > 0) {
    if (pooled.empty()) pooled.push_back(cur);
    else {
      pooled.back().first += cur.first;
      pooled.back().second += cur.second;
    }
  }
  ChiSquareResult res;
  if (pooled.size() < 2) return res;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size()), total = na + nb;
  for (const auto& [x, y] : pooled) {
    const double col = x + y;
    const double ea = col * na / total, eb = col * nb / total;
    res.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  res.degreesOfFreedom = static_cast<unsigned>(pooled.size() - 1);
  boost::math::chi_squared dist(res.degreesOfFreedom);
  res.pValue = boost::math::cdf(boost::math::complement(dist, res.statistic));
  return res;
}

std::vector<std::uint64_t> rootChildLoads(const SplitTree& t) {
  const RootedTree& tree = t.tree();
  std::vector<std::uint64_t> load(tree.size(), 0);
  const auto& order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    load[*it] += t.bag(*it).size();
    if (auto p = tree.parent(*it)) load[*p] += load[*it];
  }
  std::vector<std::uint64_t> out;
  for (NodeId c : tree.children(tree.root())) out.push_back(load[c]);
  out.resize(std::max<std::size_t>(out.size(), t.params().b), 0);
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace treepat
