#pragma once

#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace treepat {

/// Neumaier-compensated sum for floating point, plain sum otherwise.
template <class T>
class Accumulator {
 public:
  void add(const T& x) {
    if constexpr (std::is_floating_point_v<T>) {
      const T t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x)) carry_ += (sum_ - t) + x;
      else carry_ += (x - t) + sum_;
      sum_ = t;
    } else {
      sum_ += x;
    }
  }
  T value() const { return sum_ + carry_; }

 private:
  T sum_ = T(0);
  T carry_ = T(0);
};

/// Central sample moments m_1..m_order about the sample mean (m_1 = mean).
template <class T>
std::vector<T> centralMoments(const std::vector<T>& xs, unsigned order) {
  if (xs.empty()) throw std::invalid_argument("moments of an empty sample");
  const T n = T(static_cast<long>(xs.size()));
  Accumulator<T> total;
  for (const T& x : xs) total.add(x);
  const T mean = total.value() / n;
  std::vector<Accumulator<T>> acc(order + 1);
  for (const T& x : xs) {
    const T d = x - mean;
    T power = d;
    for (unsigned j = 2; j <= order; ++j) {
      power = power * d;
      acc[j].add(power);
    }
  }
  std::vector<T> m(order + 1, T(0));
  m[1] = mean;
  for (unsigned j = 2; j <= order; ++j) m[j] = acc[j].value() / n;
  return m;
}

/// Fisher's k-statistics k_1..k_maxOrder (maxOrder <= 4): the symmetric
/// unbiased estimators of the first four cumulants.
template <class T>
std::vector<T> kStatistics(const std::vector<T>& xs, unsigned maxOrder) {
  if (maxOrder < 1 || maxOrder > 4) throw std::invalid_argument("k-statistics are provided for orders 1..4");
  if (xs.size() < maxOrder || (maxOrder >= 2 && xs.size() < 2))
    throw std::invalid_argument("k-statistic of order " + std::to_string(maxOrder) + " needs at least " +
                                std::to_string(std::max(2u, maxOrder)) + " observations");
  const auto m = centralMoments(xs, std::max(2u, maxOrder));
  const T n = T(static_cast<long>(xs.size()));
  std::vector<T> k{m[1]};
  if (maxOrder >= 2) k.push_back(n / (n - T(1)) * m[2]);
  if (maxOrder >= 3) k.push_back(n * n / ((n - T(1)) * (n - T(2))) * m[3]);
  if (maxOrder >= 4)
    k.push_back(n * n * ((n + T(1)) * m[4] - T(3) * (n - T(1)) * m[2] * m[2]) /
                ((n - T(1)) * (n - T(2)) * (n - T(3))));
  return k;
}

/// Plug-in sample cumulants kappa_1..kappa_maxOrder (maxOrder <= 6) from
/// central moments; biased for order >= 2.
template <class T>
std::vector<T> sampleCumulants(const std::vector<T>& xs, unsigned maxOrder) {
  if (maxOrder < 1 || maxOrder > 6) throw std::invalid_argument("sample cumulants are provided for orders 1..6");
  const auto m = centralMoments(xs, std::max(2u, maxOrder));
  std::vector<T> c{m[1]};
  if (maxOrder >= 2) c.push_back(m[2]);
  if (maxOrder >= 3) c.push_back(m[3]);
  if (maxOrder >= 4) c.push_back(m[4] - T(3) * m[2] * m[2]);
  if (maxOrder >= 5) c.push_back(m[5] - T(10) * m[3] * m[2]);
  if (maxOrder >= 6)
    c.push_back(m[6] - T(15) * m[4] * m[2] - T(10) * m[3] * m[3] + T(30) * m[2] * m[2] * m[2]);
  return c;
}

}  // namespace treepat
