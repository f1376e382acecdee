#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "treepat/element_poset.hpp"
#include "treepat/rational.hpp"

namespace treepat {

/// A permutation alpha_1 ... alpha_k of {1, ..., k}.
class Pattern {
 public:
  /// Throws std::invalid_argument unless entries is a permutation of 1..k.
  explicit Pattern(std::vector<unsigned> entries);
  /// "231" (k <= 9) or "1,10,2,...".
  static Pattern parse(const std::string& text);

  unsigned length() const { return static_cast<unsigned>(entries_.size()); }
  unsigned first() const { return entries_.front(); }
  const std::vector<unsigned>& entries() const { return entries_; }
  std::string str() const;

  bool operator==(const Pattern&) const = default;

 private:
  std::vector<unsigned> entries_;
};

/// Every pattern of length k in lexicographic order.
std::vector<Pattern> allPatterns(unsigned k);

/// Bijection from elements (nodes, or balls in id order) onto 1..n.
class Labelling {
 public:
  explicit Labelling(std::vector<std::uint32_t> labels);
  static Labelling identity(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  std::uint32_t operator[](std::size_t e) const { return labels_[e]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }

 private:
  std::vector<std::uint32_t> labels_;
};

/// Uniform labelling by an unbiased shuffle; deterministic in the seed.
Labelling sampleLabelling(std::size_t n, std::uint64_t seed);
/// The same draw written into an existing buffer of size n.
void fillUniformLabels(std::vector<std::uint32_t>& labels, std::uint64_t seed);

/// Counts ancestor-ordered k-chains whose labels induce alpha. Reusable
/// across labellings of the same tree.
///
/// For each element e, the chains ending at e are chosen from the bags on
/// the root path of node(e), one element per bag. The search walks that
/// path, rejecting a prefix as soon as its relative order disagrees with
/// alpha, so the cost per element is far below C(depth, k-1).
class OccurrenceCounter {
 public:
  OccurrenceCounter(const ElementPoset& poset, Pattern alpha);

  std::uint64_t count(const Labelling& pi) const;
  /// Same, reading labels straight from a vector (no bijectivity check).
  std::uint64_t countUnchecked(const std::vector<std::uint32_t>& labels) const;

 private:
  std::uint64_t chainsEndingAt(std::uint32_t x, std::size_t depth) const;

  ElementPoset poset_;
  Pattern alpha_;
  // Per pattern position p < k-1: whether alpha_p > alpha_k, and for q < p
  // whether alpha_q > alpha_p.
  std::vector<char> aboveLast_;
  std::vector<std::vector<char>> above_;
  mutable std::vector<std::uint32_t> pathBegin_;
  mutable std::vector<std::uint32_t> pathLabels_;
};

std::uint64_t countOccurrences(const ElementPoset& poset, const Pattern& alpha, const Labelling& pi);

/// (1/k!) sum_e e_{k-1}(sizes of the bags strictly above node(e)); for a
/// node tree this is (1/k!) sum_v C(d(v), k-1).
Rational expectedOccurrences(const ElementPoset& poset, const Pattern& alpha);

/// Largest universe exactDistribution will enumerate by default (9! labellings).
inline constexpr std::size_t kExactUniverseCap = 9;

/// Exact pmf of R(alpha, T) under a uniform labelling, by enumeration of
/// all n! labellings. Throws InfeasibleError beyond `cap` elements.
std::map<std::uint64_t, Rational> exactDistribution(const ElementPoset& poset, const Pattern& alpha,
                                                    std::size_t cap = kExactUniverseCap);

}  // namespace treepat
