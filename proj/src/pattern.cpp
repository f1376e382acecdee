#include "treepat/pattern.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "treepat/errors.hpp"
#include "treepat/random.hpp"

namespace treepat {

Pattern::Pattern(std::vector<unsigned> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("pattern must have length >= 1");
  std::vector<char> seen(entries_.size() + 1, 0);
  for (unsigned a : entries_) {
    if (a == 0 || a > entries_.size() || seen[a])
      throw std::invalid_argument("pattern " + str() + " is not a permutation of 1.." +
                                  std::to_string(entries_.size()));
    seen[a] = 1;
  }
}

Pattern Pattern::parse(const std::string& text) {
  std::vector<unsigned> entries;
  if (text.find(',') != std::string::npos) {
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit))
        throw std::invalid_argument("malformed pattern '" + text + "'");
      entries.push_back(static_cast<unsigned>(std::stoul(item)));
    }
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') throw std::invalid_argument("malformed pattern '" + text + "'");
      entries.push_back(static_cast<unsigned>(c - '0'));
    }
  }
  return Pattern(std::move(entries));
}

std::string Pattern::str() const {
  const bool compact = entries_.size() <= 9;
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!compact && i) out += ",";
    out += std::to_string(entries_[i]);
  }
  return out;
}

std::vector<Pattern> allPatterns(unsigned k) {
  std::vector<unsigned> p(k);
  std::iota(p.begin(), p.end(), 1u);
  std::vector<Pattern> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Labelling::Labelling(std::vector<std::uint32_t> labels) : labels_(std::move(labels)) {
  std::vector<char> seen(labels_.size() + 1, 0);
  for (std::uint32_t x : labels_) {
    if (x == 0 || x > labels_.size() || seen[x])
      throw std::invalid_argument("labelling is not a bijection onto 1.." + std::to_string(labels_.size()));
    seen[x] = 1;
  }
}

Labelling Labelling::identity(std::size_t n) {
  std::vector<std::uint32_t> labels(n);
  std::iota(labels.begin(), labels.end(), 1u);
  return Labelling(std::move(labels));
}

Labelling sampleLabelling(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("labelling needs n >= 1");
  std::vector<std::uint32_t> labels(n);
  fillUniformLabels(labels, seed);
  return Labelling(std::move(labels));
}

void fillUniformLabels(std::vector<std::uint32_t>& labels, std::uint64_t seed) {
  // Explicit Fisher-Yates: std::shuffle's draw sequence is not portable.
  SplitMix64 rng(deriveSeed(seed, 0x1abe11ULL));
  std::iota(labels.begin(), labels.end(), 1u);
  for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.below(i)]);
}

// ---------------------------------------------------------------------------

OccurrenceCounter::OccurrenceCounter(const ElementPoset& poset, Pattern alpha)
    : poset_(poset), alpha_(std::move(alpha)) {
  const unsigned k = alpha_.length();
  const auto& e = alpha_.entries();
  aboveLast_.resize(k);
  above_.assign(k, std::vector<char>(k, 0));
  for (unsigned p = 0; p + 1 < k; ++p) {
    aboveLast_[p] = e[p] > e[k - 1];
    for (unsigned q = 0; q < p; ++q) above_[p][q] = e[q] > e[p];
  }
  pathBegin_.assign(poset.tree().height() + 2, 0);
}

std::uint64_t OccurrenceCounter::chainsEndingAt(std::uint32_t x, std::size_t depth) const {
  const unsigned need = alpha_.length() - 1;
  if (need == 0) return 1;
  if (depth < need) return 0;
  if (need == 1) {
    std::uint64_t c = 0;
    const bool wantAbove = aboveLast_[0];
    for (std::uint32_t i = pathBegin_[0]; i < pathBegin_[depth]; ++i)
      c += (pathLabels_[i] > x) == wantAbove;
    return c;
  }
  // Depth-first over chain positions; bag[p] is the path index of position p.
  std::uint32_t bag[16];
  std::uint32_t label[16];
  std::uint32_t slot[16];
  std::uint64_t total = 0;
  unsigned p = 0;
  bag[0] = 0;
  slot[0] = pathBegin_[0];
  while (true) {
    // Advance position p to its next admissible (bag, element).
    bool placed = false;
    while (bag[p] + (need - p) <= depth) {
      if (slot[p] >= pathBegin_[bag[p] + 1]) {
        ++bag[p];
        if (bag[p] + (need - p) > depth) break;
        slot[p] = pathBegin_[bag[p]];
        continue;
      }
      const std::uint32_t y = pathLabels_[slot[p]++];
      if ((y > x) != static_cast<bool>(aboveLast_[p])) continue;
      bool ok = true;
      for (unsigned q = 0; q < p && ok; ++q) ok = (label[q] > y) == static_cast<bool>(above_[p][q]);
      if (!ok) continue;
      label[p] = y;
      placed = true;
      break;
    }
    if (!placed) {
      if (p == 0) break;
      --p;
      continue;
    }
    if (p + 1 == need) {
      ++total;
      continue;
    }
    ++p;
    bag[p] = bag[p - 1] + 1;
    slot[p] = pathBegin_[bag[p]];
  }
  return total;
}

std::uint64_t OccurrenceCounter::countUnchecked(const std::vector<std::uint32_t>& labels) const {
  const RootedTree& t = poset_.tree();
  if (alpha_.length() > 16) throw std::invalid_argument("pattern length above 16 is not supported");
  if (alpha_.length() > t.height() + 1) return 0;
  pathLabels_.clear();
  std::uint64_t total = 0;
  for (NodeId v : t.preorder()) {
    const std::uint32_t d = t.depth(v);
    // Drop path entries at depth >= d; what remains are v's ancestors.
    pathLabels_.resize(pathBegin_[d]);
    const auto elems = poset_.elementsAt(v);
    for (std::uint32_t e : elems) total += chainsEndingAt(labels[e], d);
    for (std::uint32_t e : elems) pathLabels_.push_back(labels[e]);
    pathBegin_[d + 1] = static_cast<std::uint32_t>(pathLabels_.size());
  }
  return total;
}

std::uint64_t OccurrenceCounter::count(const Labelling& pi) const {
  if (pi.size() != poset_.size())
    throw std::invalid_argument("labelling covers " + std::to_string(pi.size()) + " elements, tree has " +
                                std::to_string(poset_.size()));
  return countUnchecked(pi.labels());
}

std::uint64_t countOccurrences(const ElementPoset& poset, const Pattern& alpha, const Labelling& pi) {
  return OccurrenceCounter(poset, alpha).count(pi);
}

Rational expectedOccurrences(const ElementPoset& poset, const Pattern& alpha) {
  const RootedTree& t = poset.tree();
  const unsigned need = alpha.length() - 1;
  // sym[d][j]: e_j of the bag sizes at depths 0..d-1 on the current path.
  std::vector<std::vector<BigInt>> sym(t.height() + 2, std::vector<BigInt>(need + 1, 0));
  sym[0][0] = 1;
  BigInt total = 0;
  for (NodeId v : t.preorder()) {
    const std::uint32_t d = t.depth(v);
    const std::uint64_t bag = poset.bagSize(v);
    total += sym[d][need] * static_cast<unsigned long>(bag);
    sym[d + 1][0] = 1;
    for (unsigned j = 1; j <= need; ++j) sym[d + 1][j] = sym[d][j] + sym[d][j - 1] * static_cast<unsigned long>(bag);
  }
  return makeRational(total, factorial(alpha.length()));
}

std::map<std::uint64_t, Rational> exactDistribution(const ElementPoset& poset, const Pattern& alpha,
                                                    std::size_t cap) {
  const std::size_t n = poset.size();
  if (n > cap)
    throw InfeasibleError("exact distribution enumerates n! labellings; universe of " + std::to_string(n) +
                          " elements exceeds the cap of " + std::to_string(cap));
  OccurrenceCounter counter(poset, alpha);
  std::vector<std::uint32_t> labels(n);
  std::iota(labels.begin(), labels.end(), 1u);
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::uint64_t total = 0;
  do {
    ++histogram[counter.countUnchecked(labels)];
    ++total;
  } while (std::next_permutation(labels.begin(), labels.end()));
  std::map<std::uint64_t, Rational> pmf;
  for (const auto& [value, hits] : histogram)
    pmf.emplace(value, makeRational(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(total))));
  return pmf;
}

}  // namespace treepat
