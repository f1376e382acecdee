#include "treepat/rational.hpp"

#include <stdexcept>
#include <vector>

namespace treepat {

BigInt factorial(unsigned n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

BigInt fallingFactorial(std::uint64_t n, unsigned k) {
  if (k > n) return 0;
  BigInt out = 1;
  for (unsigned i = 0; i < k; ++i) out *= static_cast<unsigned long>(n - i);
  return out;
}

Rational makeRational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string toString(const BigInt& z) { return z.get_str(); }

std::string toString(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string factorString(const BigInt& z) {
  BigInt rest = abs(z);
  if (rest == 0) return "0";
  if (rest == 1) return "1";
  std::string out;
  auto emit = [&out](const BigInt& p, unsigned e) {
    if (!out.empty()) out += "*";
    out += p.get_str();
    if (e > 1) out += "^" + std::to_string(e);
  };
  for (unsigned long p = 2; p < 100000 && rest > 1; ++p) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      rest /= p;
      ++e;
    }
    if (e) emit(p, e);
  }
  if (rest > 1) {
    // Cofactor has no prime below 1e5; report it as is (prime or not).
    emit(rest, 1);
  }
  return out;
}

std::string factoredString(const Rational& q) {
  if (q == 0) return "0";
  std::string out = sgn(q) < 0 ? "-" : "";
  out += factorString(q.get_num());
  if (q.get_den() != 1) out += "/(" + factorString(q.get_den()) + ")";
  return out;
}

Rational parseRational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num, den;
    if (num.set_str(text.substr(0, slash), 10) != 0 || den.set_str(text.substr(slash + 1), 10) != 0)
      throw std::invalid_argument("malformed rational '" + text + "'");
    return makeRational(num, den);
  }
  const auto dot = text.find('.');
  std::string digits = text;
  BigInt den = 1;
  if (dot != std::string::npos) {
    digits = text.substr(0, dot) + text.substr(dot + 1);
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  }
  BigInt num;
  if (digits.empty() || digits == "-" || num.set_str(digits, 10) != 0)
    throw std::invalid_argument("malformed rational '" + text + "'");
  return makeRational(num, den);
}

double toDouble(const Rational& q) { return q.get_d(); }
double toDouble(const BigInt& z) { return z.get_d(); }

}  // namespace treepat
