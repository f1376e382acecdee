#include "treepat/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "treepat/constants.hpp"
#include "treepat/kstatistics.hpp"
#include "treepat/random.hpp"

namespace treepat {

namespace {

std::vector<double> estimatesOf(const std::vector<double>& xs, unsigned maxR) {
  auto out = kStatistics(xs, std::min(maxR, 4u));
  if (maxR > 4) {
    const auto plug = sampleCumulants(xs, maxR);
    out.insert(out.end(), plug.begin() + 4, plug.end());
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> sampleOccurrenceCounts(const ElementPoset& t, const Pattern& alpha,
                                                  const SamplingOptions& options) {
  std::vector<std::uint64_t> counts(options.samples);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(std::max<std::size_t>(1, options.samples))));
  auto work = [&](unsigned w) {
    OccurrenceCounter counter(t, alpha);
    std::vector<std::uint32_t> labels(t.size());
    for (std::size_t i = w; i < options.samples; i += workers) {
      fillUniformLabels(labels, deriveSeed(options.seed, i));
      counts[i] = counter.countUnchecked(labels);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return counts;
}

std::vector<CumulantEstimate> estimateCumulants(const std::vector<std::uint64_t>& counts, unsigned maxR,
                                                std::uint64_t seed, unsigned bootstrapResamples) {
  if (maxR < 1 || maxR > 6) throw std::invalid_argument("maxR must be in 1..6, got " + std::to_string(maxR));
  if (counts.size() < 30)
    throw std::invalid_argument("at least 30 samples are needed, got " + std::to_string(counts.size()));
  std::vector<double> xs(counts.begin(), counts.end());
  const auto point = estimatesOf(xs, maxR);

  std::vector<Accumulator<double>> sum(maxR), sumSq(maxR);
  SplitMix64 rng(deriveSeed(seed, 0xb0075742));
  std::vector<double> resample(xs.size());
  for (unsigned b = 0; b < bootstrapResamples; ++b) {
    for (auto& x : resample) x = xs[rng.below(xs.size())];
    const auto est = estimatesOf(resample, maxR);
    for (unsigned j = 0; j < maxR; ++j) {
      sum[j].add(est[j]);
      sumSq[j].add(est[j] * est[j]);
    }
  }

  std::vector<CumulantEstimate> out;
  for (unsigned j = 0; j < maxR; ++j) {
    CumulantEstimate e;
    e.order = j + 1;
    e.estimate = point[j];
    e.sampleCount = counts.size();
    e.estimator = j < 4 ? CumulantEstimator::KStatistic : CumulantEstimator::SampleCumulant;
    if (bootstrapResamples >= 2) {
      const double B = bootstrapResamples;
      const double mean = sum[j].value() / B;
      const double var = (sumSq[j].value() - B * mean * mean) / (B - 1);
      e.standardError = var > 0 ? std::sqrt(var) : 0.0;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<CumulantEstimate> estimateCumulants(const ElementPoset& t, const Pattern& alpha, unsigned maxR,
                                                const SamplingOptions& options) {
  if (maxR < 1 || maxR > 6) throw std::invalid_argument("maxR must be in 1..6, got " + std::to_string(maxR));
  if (options.samples < 30)
    throw std::invalid_argument("at least 30 samples are needed, got " + std::to_string(options.samples));
  return estimateCumulants(sampleOccurrenceCounts(t, alpha, options), maxR, options.seed,
                           options.bootstrapResamples);
}

std::vector<Rational> exactCumulants(const ElementPoset& t, const Pattern& alpha, unsigned maxR) {
  if (maxR < 1) throw std::invalid_argument("maxR must be positive");
  const auto pmf = exactDistribution(t, alpha);
  std::vector<Rational> moments(maxR, Rational(0));
  for (const auto& [value, p] : pmf) {
    Rational power(1);
    const Rational x(static_cast<unsigned long>(value));
    for (unsigned j = 0; j < maxR; ++j) {
      power *= x;
      moments[j] += p * power;
    }
  }
  return momentsToCumulants(moments);
}

TheoremRatio theoremRatio(const ElementPoset& t, const Pattern& alpha, unsigned r, const CumulantEstimate& estimate,
                          TupleMode mode) {
  if (r < 1) throw std::invalid_argument("r must be positive");
  if (estimate.order != r)
    throw std::invalid_argument("estimate has order " + std::to_string(estimate.order) + ", expected " +
                                std::to_string(r));
  TheoremRatio out;
  if (r == 1) {
    out.d = Rational(1);
    out.upsilon = 0;
    const Rational mean = expectedOccurrences(t, alpha);
    const double ref = toDouble(mean);
    out.scaled = estimate.estimate;
    if (ref == 0) {
      out.dIsZero = true;
      return out;
    }
    out.ratio = estimate.estimate / ref;
    out.ratioSE = estimate.standardError / ref;
    return out;
  }
  out.d = dConstant(alpha, r);
  if (alpha.length() >= 2) {
    UpsilonSpec spec;
    spec.r = r;
    spec.k = alpha.length();
    spec.mode = mode;
    out.upsilon = upsilon(t, spec);
  }
  const double ups = out.upsilon.get_d();
  out.scaled = ups != 0 ? estimate.estimate / ups : 0.0;
  if (sgn(out.d) == 0 || ups == 0) {
    out.dIsZero = sgn(out.d) == 0;
    return out;
  }
  const double denom = toDouble(out.d) * ups;
  out.ratio = estimate.estimate / denom;
  out.ratioSE = estimate.standardError / std::abs(denom);
  return out;
}

}  // namespace treepat
