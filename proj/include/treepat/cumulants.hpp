#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treepat/element_poset.hpp"
#include "treepat/pattern.hpp"
#include "treepat/rational.hpp"
#include "treepat/tree_params.hpp"

namespace treepat {

enum class CumulantEstimator { KStatistic, SampleCumulant };

struct CumulantEstimate {
  unsigned order = 1;
  double estimate = 0;
  double standardError = 0;
  std::size_t sampleCount = 0;
  CumulantEstimator estimator = CumulantEstimator::KStatistic;
};

struct SamplingOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;            // results do not depend on this
  unsigned bootstrapResamples = 200;
};

/// R(alpha, T) under `samples` independent uniform labellings; labelling i
/// uses seed deriveSeed(seed, i), so the draws are fixed by the seed alone.
std::vector<std::uint64_t> sampleOccurrenceCounts(const ElementPoset& t, const Pattern& alpha,
                                                  const SamplingOptions& options);

/// k-statistics for orders <= 4, plug-in sample cumulants for 5 and 6;
/// standard errors from a nonparametric bootstrap. Needs samples >= 30 and
/// maxR <= 6.
std::vector<CumulantEstimate> estimateCumulants(const std::vector<std::uint64_t>& counts, unsigned maxR,
                                                std::uint64_t seed, unsigned bootstrapResamples = 200);
std::vector<CumulantEstimate> estimateCumulants(const ElementPoset& t, const Pattern& alpha, unsigned maxR,
                                                const SamplingOptions& options);

/// Exact kappa_1..kappa_maxR from the full labelling enumeration.
std::vector<Rational> exactCumulants(const ElementPoset& t, const Pattern& alpha, unsigned maxR);

/// kappa_r against the prediction D_{alpha,r} Upsilon_r^k(T).
struct TheoremRatio {
  Rational d;
  BigInt upsilon;
  std::optional<double> ratio;     // empty when D = 0
  std::optional<double> ratioSE;
  double scaled = 0;               // estimate / Upsilon, reported when D = 0
  bool dIsZero = false;
};

/// For r >= 2 the reference is D_{alpha,r} Upsilon_r^k (mode as given). For
/// r = 1 it is the exact mean, so the ratio measures the estimate's bias.
TheoremRatio theoremRatio(const ElementPoset& t, const Pattern& alpha, unsigned r, const CumulantEstimate& estimate,
                          TupleMode mode = TupleMode::WithRepetition);

}  // namespace treepat
