#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treepat/element_poset.hpp"
#include "treepat/fused_paths.hpp"
#include "treepat/pattern.hpp"
#include "treepat/rational.hpp"

namespace treepat {

/// a_{k,l}(alpha): probability that a uniform labelling of S_{k,l} makes
/// every ray induce a pattern starting with alpha1:
///   ((alpha1-1) l)! ((k-alpha1) l)! / (((alpha1-1)! (k-alpha1)!)^l ((k-1) l + 1)!).
Rational starLabelProbability(unsigned k, unsigned alpha1, unsigned ell);

/// Blocks of {1..r}, each sorted, blocks ordered by their least element.
using SetPartition = std::vector<std::vector<unsigned>>;

inline constexpr unsigned kSetPartitionCap = 15;

/// Every partition of {1..r} exactly once, via restricted growth strings.
/// Throws InfeasibleError for r > 15.
class SetPartitionStream {
 public:
  explicit SetPartitionStream(unsigned r);
  /// Writes the next partition; false once the stream is exhausted.
  bool next(SetPartition& out);

 private:
  unsigned r_;
  std::vector<unsigned> code_, maxPrefix_;
  bool started_ = false, done_ = false;
};

BigInt bellNumber(unsigned r);

/// D_{alpha,r} = sum_tau (-1)^{|tau|-1} (|tau|-1)! prod_{s in tau} a_{k,|s|}(alpha).
Rational dConstant(const Pattern& alpha, unsigned r);
Rational dConstant(unsigned k, unsigned alpha1, unsigned r);

inline constexpr unsigned kBernoulliCap = 50;
/// B_r with B_1 = -1/2. Throws InfeasibleError for r > 50.
Rational bernoulli(unsigned r);

/// Raw moments m_1..m_n to cumulants k_1..k_n and back.
std::vector<Rational> momentsToCumulants(const std::vector<Rational>& moments);
std::vector<Rational> cumulantsToMoments(const std::vector<Rational>& cumulants);

/// B_r (-1)^r / r (Upsilon_r^2 - n): the r-th cumulant of the inversion
/// count of a uniformly labelled tree, r >= 2.
Rational inversionCumulantExact(const RootedTree& t, unsigned r);

struct DTableRow {
  unsigned k;
  unsigned alpha1;  // the smaller member of {alpha1, k+1-alpha1}
  std::vector<Rational> values;  // r = 1..maxR
  std::string classLabel() const;  // "{1;4}" or "{3}"
};

/// One row per length k in 2..maxLen and class {a, k+1-a}. Throws
/// std::invalid_argument unless maxLen <= 8 and maxR <= 6.
std::vector<DTableRow> dTable(unsigned maxLen, unsigned maxR);

/// Published D values for lengths 2..6 and r = 1..5.
struct ReferenceD {
  unsigned k;
  unsigned alpha1;
  unsigned r;
  Rational value;
};
const std::vector<ReferenceD>& referenceDTable();

/// Joint cumulant of the indicators [path i induces alpha] over a uniform
/// labelling of the member's vertices. Joint probabilities come from
/// counting labellings that satisfy every chosen path's order, by dynamic
/// programming over vertex subsets.
Rational fusedMixedCumulant(const FusedGraph& g, const Pattern& alpha);

/// kappa_r(R(alpha, T)) = sum over connected labelled fusions G of r
/// alpha-paths of [G]_T times the joint cumulant of G. Disconnected
/// fusions drop out because disjoint vertex sets carry independent
/// relative orders. Exact; limited by the fused-path guard k*r <= 12.
Rational cumulantByEmbeddings(const ElementPoset& t, const Pattern& alpha, unsigned r);

}  // namespace treepat
