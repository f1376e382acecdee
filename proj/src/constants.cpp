#include "treepat/constants.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "treepat/embedding.hpp"
#include "treepat/errors.hpp"
#include "treepat/tree_params.hpp"

namespace treepat {

Rational starLabelProbability(unsigned k, unsigned alpha1, unsigned ell) {
  if (k < 2) throw std::invalid_argument("a_{k,l} needs k >= 2");
  if (alpha1 < 1 || alpha1 > k)
    throw std::invalid_argument("alpha1 = " + std::to_string(alpha1) + " is outside 1.." + std::to_string(k));
  if (ell < 1) throw std::invalid_argument("a_{k,l} needs l >= 1");
  const unsigned below = alpha1 - 1, above = k - alpha1;
  BigInt num = factorial(below * ell) * factorial(above * ell);
  BigInt base = factorial(below) * factorial(above), den;
  mpz_pow_ui(den.get_mpz_t(), base.get_mpz_t(), ell);
  den *= factorial((k - 1) * ell + 1);
  return makeRational(num, den);
}

SetPartitionStream::SetPartitionStream(unsigned r) : r_(r), code_(r, 0), maxPrefix_(r, 0) {
  if (r < 1) throw std::invalid_argument("set partitions need r >= 1");
  if (r > kSetPartitionCap)
    throw InfeasibleError("set partitions of more than " + std::to_string(kSetPartitionCap) +
                          " elements exceed the Bell-number limit");
}

bool SetPartitionStream::next(SetPartition& out) {
  if (done_) return false;
  if (started_) {
    // Rightmost position that may still grow; reset everything after it.
    unsigned i = r_;
    while (i-- > 1)
      if (code_[i] <= maxPrefix_[i]) break;
    if (i == 0) {
      done_ = true;
      return false;
    }
    ++code_[i];
    for (unsigned j = i + 1; j < r_; ++j) {
      code_[j] = 0;
      maxPrefix_[j] = std::max(maxPrefix_[j - 1], code_[j - 1]);
    }
  }
  started_ = true;
  unsigned blocks = 0;
  for (unsigned c : code_) blocks = std::max(blocks, c + 1);
  out.assign(blocks, {});
  for (unsigned i = 0; i < r_; ++i) out[code_[i]].push_back(i + 1);
  return true;
}

BigInt bellNumber(unsigned r) {
  // Bell triangle.
  std::vector<BigInt> row{1};
  for (unsigned i = 0; i < r; ++i) {
    std::vector<BigInt> next{row.back()};
    for (const auto& x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

Rational dConstant(unsigned k, unsigned alpha1, unsigned r) {
  if (r < 1) throw std::invalid_argument("D needs r >= 1");
  if (k == 1) return r == 1 ? Rational(1) : Rational(0);  // R is the constant n
  std::vector<Rational> a(r + 1);
  for (unsigned ell = 1; ell <= r; ++ell) a[ell] = starLabelProbability(k, alpha1, ell);
  SetPartitionStream stream(r);
  SetPartition tau;
  Rational total = 0;
  while (stream.next(tau)) {
    Rational term = factorial(static_cast<unsigned>(tau.size()) - 1);
    if (tau.size() % 2 == 0) term = -term;
    for (const auto& block : tau) term *= a[block.size()];
    total += term;
  }
  return total;
}

Rational dConstant(const Pattern& alpha, unsigned r) { return dConstant(alpha.length(), alpha.first(), r); }

Rational bernoulli(unsigned r) {
  if (r > kBernoulliCap) throw InfeasibleError("Bernoulli numbers are limited to r <= 50");
  std::vector<Rational> b(r + 1);
  b[0] = 1;
  for (unsigned m = 1; m <= r; ++m) {
    Rational acc = 0;
    for (unsigned j = 0; j < m; ++j) acc += Rational(binomial(m + 1, j)) * b[j];
    b[m] = -acc / (m + 1);
  }
  return b[r];
}

std::vector<Rational> momentsToCumulants(const std::vector<Rational>& moments) {
  if (moments.empty()) throw std::invalid_argument("momentsToCumulants needs at least one moment");
  const std::size_t n = moments.size();
  std::vector<Rational> m(n + 1), kappa(n + 1);
  m[0] = 1;
  for (std::size_t i = 0; i < n; ++i) m[i + 1] = moments[i];
  for (std::size_t r = 1; r <= n; ++r) {
    Rational acc = m[r];
    for (std::size_t j = 1; j < r; ++j) acc -= Rational(binomial(static_cast<long>(r) - 1, static_cast<long>(j) - 1)) * kappa[j] * m[r - j];
    kappa[r] = acc;
  }
  return {kappa.begin() + 1, kappa.end()};
}

std::vector<Rational> cumulantsToMoments(const std::vector<Rational>& cumulants) {
  if (cumulants.empty()) throw std::invalid_argument("cumulantsToMoments needs at least one cumulant");
  const std::size_t n = cumulants.size();
  std::vector<Rational> m(n + 1), kappa(n + 1);
  m[0] = 1;
  for (std::size_t i = 0; i < n; ++i) kappa[i + 1] = cumulants[i];
  for (std::size_t r = 1; r <= n; ++r) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= r; ++j) acc += Rational(binomial(static_cast<long>(r) - 1, static_cast<long>(j) - 1)) * kappa[j] * m[r - j];
    m[r] = acc;
  }
  return {m.begin() + 1, m.end()};
}

Rational inversionCumulantExact(const RootedTree& t, unsigned r) {
  if (r < 1) throw std::invalid_argument("cumulant order must be >= 1");
  const BigInt ups = upsilon(t, {r, 2, TupleMode::WithRepetition});
  Rational factor = bernoulli(r) / r;
  if (r % 2) factor = -factor;
  return factor * Rational(ups - static_cast<unsigned long>(t.size()));
}

std::string DTableRow::classLabel() const {
  const unsigned other = k + 1 - alpha1;
  return other == alpha1 ? "{" + std::to_string(alpha1) + "}"
                         : "{" + std::to_string(alpha1) + ";" + std::to_string(other) + "}";
}

std::vector<DTableRow> dTable(unsigned maxLen, unsigned maxR) {
  if (maxLen < 2 || maxLen > 8) throw std::invalid_argument("D table needs 2 <= max length <= 8");
  if (maxR < 1 || maxR > 6) throw std::invalid_argument("D table needs 1 <= max r <= 6");
  std::vector<DTableRow> rows;
  for (unsigned k = 2; k <= maxLen; ++k)
    for (unsigned a = 1; 2 * a <= k + 1; ++a) {
      DTableRow row{k, a, {}};
      for (unsigned r = 1; r <= maxR; ++r) row.values.push_back(dConstant(k, a, r));
      rows.push_back(std::move(row));
    }
  return rows;
}

namespace {

// "2^11*5*7^2" -> 2^11 * 5 * 7^2
BigInt productOf(const std::string& factors) {
  BigInt out = 1;
  std::stringstream in(factors);
  std::string item;
  while (std::getline(in, item, '*')) {
    const auto caret = item.find('^');
    BigInt p(item.substr(0, caret)), power;
    unsigned e = caret == std::string::npos ? 1 : static_cast<unsigned>(std::stoul(item.substr(caret + 1)));
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), e);
    out *= power;
  }
  return out;
}

}  // namespace

const std::vector<ReferenceD>& referenceDTable() {
  struct Raw {
    unsigned k, a;
    const char* cells[5][2];  // numerator, factored denominator
  };
  static const Raw raw[] = {
      {2, 1, {{"1", "2"}, {"1", "2^2*3"}, {"0", "1"}, {"-1", "2^3*3*5"}, {"0", "1"}}},
      {3, 1, {{"1", "2*3"}, {"1", "3^2*5"}, {"2", "3^3*5*7"}, {"-2", "3^3*5^2*7"}, {"-8", "3^4*5*7*11"}}},
      {3, 2,
       {{"1", "2*3"}, {"1", "2^2*3^2*5"}, {"-1", "2^2*3^3*5*7"}, {"-1", "2^3*3^3*5^2*7"}, {"1", "2^2*3^4*5*7*11"}}},
      {4, 1, {{"1", "2^3*3"}, {"1", "2^6*7"}, {"1", "2^8*5*7"}, {"-3", "2^11*5*7^2*13"}, {"-3", "2^12*7^2*13"}}},
      {4, 2,
       {{"1", "2^3*3"},
        {"13", "2^6*3^2*5*7"},
        {"-1", "2^8*3^3*5*7"},
        {"-5591", "2^11*3^3*5^2*7^2*11*13"},
        {"199", "2^12*3^4*5*7^2*11*13"}}},
      {5, 1,
       {{"1", "2^3*3*5"},
        {"1", "2^2*3^4*5^2"},
        {"1", "2^2*3^4*5^3*13"},
        {"29", "2^3*3^7*5^4*13*17"},
        {"-107", "2^2*3^8*5^5*7*13*17"}}},
      {5, 2,
       {{"1", "2^3*3*5"},
        {"37", "2^6*3^4*5^2*7"},
        {"53", "2^8*3^4*5^3*7*11*13"},
        {"-849839", "2^11*3^7*5^4*7^2*11*13*17"},
        {"-1041109", "2^12*3^8*5^5*7^2*11*13*17*19"}}},
      {5, 3,
       {{"1", "2^3*3*5"},
        {"1", "2^6*3*5^2*7"},
        {"-19", "2^8*3^3*5^3*7*11*13"},
        {"-5329", "2^11*3^3*5^4*7^2*11*13*17"},
        {"10061", "2^12*3^4*5^5*7^2*11*13*17*19"}}},
      {6, 1,
       {{"1", "2^4*3^2*5"},
        {"1", "2^8*3^4*11"},
        {"1", "2^13*3^6*11"},
        {"1", "2^14*3^7*7*11^2"},
        {"-19", "2^19*3^9*7*11^2*13"}}},
      {6, 2,
       {{"1", "2^4*3^2*5"},
        {"1", "2^8*3^2*5^2*11"},
        {"509", "2^13*3^6*5^3*7*11*13"},
        {"-144227", "2^13*3^7*5^4*7*11^2*13*17*19"},
        {"-18928549", "2^19*3^9*5^5*7*11^2*13*17*19*23"}}},
      {6, 3,
       {{"1", "2^4*3^2*5"},
        {"43", "2^8*3^4*5^2*7*11"},
        {"1", "2^11*3^6*5^3*7*13"},
        {"-1970951", "2^15*3^7*5^4*7^2*11^2*13*17*19"},
        {"-173947", "2^17*3^9*5^5*7^2*11*13*17*19*23"}}},
  };
  static const std::vector<ReferenceD> table = [] {
    std::vector<ReferenceD> out;
    for (const auto& row : raw)
      for (unsigned r = 1; r <= 5; ++r)
        out.push_back({row.k, row.a, r, makeRational(BigInt(row.cells[r - 1][0]), productOf(row.cells[r - 1][1]))});
    return out;
  }();
  return table;
}

Rational fusedMixedCumulant(const FusedGraph& g, const Pattern& alpha) {
  const unsigned r = static_cast<unsigned>(g.paths.size());
  const unsigned k = alpha.length();
  const unsigned nv = g.graph.vertexCount();
  if (nv > 20) throw InfeasibleError("joint cumulant limited to 20 vertices");
  // Order constraints of one path: vertex at the position of value j sits
  // below the vertex at the position of value j+1.
  std::vector<unsigned> position(k);
  for (unsigned p = 0; p < k; ++p) position[alpha.entries()[p] - 1] = p;
  std::vector<Rational> joint(std::size_t{1} << r);
  for (std::uint32_t mask = 1; mask < (1u << r); ++mask) {
    std::vector<int> local(nv, -1);
    std::vector<unsigned> verts;
    for (unsigned i = 0; i < r; ++i)
      if ((mask >> i) & 1u) {
        if (g.paths[i].size() != k) throw std::invalid_argument("path length differs from the pattern length");
        for (unsigned v : g.paths[i])
          if (local[v] < 0) {
            local[v] = static_cast<int>(verts.size());
            verts.push_back(v);
          }
      }
    const unsigned m = static_cast<unsigned>(verts.size());
    std::vector<std::uint32_t> smaller(m, 0);
    for (unsigned i = 0; i < r; ++i)
      if ((mask >> i) & 1u)
        for (unsigned j = 0; j + 1 < k; ++j) {
          const unsigned lo = local[g.paths[i][position[j]]], hi = local[g.paths[i][position[j + 1]]];
          smaller[hi] |= 1u << lo;
        }
    std::vector<std::uint64_t> ways(std::size_t{1} << m, 0);
    ways[0] = 1;
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
      if (!ways[s]) continue;
      for (unsigned v = 0; v < m; ++v)
        if (!((s >> v) & 1u) && (smaller[v] & ~s) == 0) ways[s | (1u << v)] += ways[s];
    }
    joint[mask] = makeRational(BigInt(static_cast<unsigned long>(ways[(1u << m) - 1])), factorial(m));
  }
  SetPartitionStream stream(r);
  SetPartition tau;
  Rational total = 0;
  while (stream.next(tau)) {
    Rational term = factorial(static_cast<unsigned>(tau.size()) - 1);
    if (tau.size() % 2 == 0) term = -term;
    for (const auto& block : tau) {
      std::uint32_t bm = 0;
      for (unsigned i : block) bm |= 1u << (i - 1);
      term *= joint[bm];
    }
    total += term;
  }
  return total;
}

Rational cumulantByEmbeddings(const ElementPoset& t, const Pattern& alpha, unsigned r) {
  if (r < 1) throw std::invalid_argument("cumulant order must be >= 1");
  const auto fam = enumerateFusedPaths(alpha.length(), r, FusedVariant::ConnectedOnly);
  std::map<std::string, BigInt> counts;
  Rational total = 0;
  for (const auto& g : fam.members) {
    Rational kappa = fusedMixedCumulant(g, alpha);
    if (kappa == 0) continue;
    auto [it, fresh] = counts.try_emplace(canonicalForm(g.graph));
    if (fresh) it->second = embeddingCount(g.graph, t);
    total += kappa * Rational(it->second);
  }
  return total;
}

}  // namespace treepat
