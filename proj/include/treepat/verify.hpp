#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treepat/rooted_tree.hpp"
#include "treepat/split_tree.hpp"

namespace treepat {

struct VerifyCheck {
  std::string name;
  std::string measured;
  std::string expected;
  std::string tolerance;  // "exact", or the bound used
  bool pass = false;
  bool informational = false;  // reported, but not part of the verdict
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<VerifyCheck> checks;

  bool pass() const;
  std::size_t passed() const;
  std::size_t counted() const;
};

/// Knobs shared by the suites; zero means the suite's own default.
struct VerifyConfig {
  std::uint64_t seed = 1;
  std::optional<RootedTree> tree;  // thm1: check this tree only
  unsigned maxR = 0;               // thm1 (default 4)
  unsigned k = 0, r = 0;           // star-identity (default 3, 2)
  std::size_t trees = 0;
  std::size_t maxNodes = 0;
  unsigned minHeight = 0, maxHeight = 0;  // embed-scaling (default 6..12)
  std::size_t n = 0;                      // split suites
  std::optional<SplitParams> params;      // split suites (default BST)
  double significance = 0;                // generator-agreement (default 0.01)
};

/// thm1, table, star-identity, embed-scaling, split-good-nodes,
/// generator-agreement.
const std::vector<std::string>& verifySuiteNames();

/// Throws std::invalid_argument for an unknown suite.
VerifyReport runVerifySuite(const std::string& name, const VerifyConfig& config);

/// Fraction of nodes whose depth is within (ln n)^0.6 of ln(n)/|mu|.
double goodNodeFraction(const SplitTree& t);

/// Two-sample chi-square homogeneity test on equal-sized categorical
/// samples, pooling sparse cells in key order until each pooled cell has
/// at least `minCell` observations in total.
struct ChiSquareResult {
  double statistic = 0;
  unsigned degreesOfFreedom = 0;
  double pValue = 1;
};
ChiSquareResult chiSquareHomogeneity(const std::vector<std::vector<std::uint64_t>>& a,
                                     const std::vector<std::vector<std::uint64_t>>& b, std::uint64_t minCell = 10);

/// Sizes of the root's child subtrees in balls, sorted decreasingly and
/// padded with zeros to length b.
std::vector<std::uint64_t> rootChildLoads(const SplitTree& t);

}  // namespace treepat
