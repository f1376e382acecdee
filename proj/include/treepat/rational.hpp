#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace treepat {

using BigInt = mpz_class;
/// Always canonical: lowest terms, positive denominator, zero is 0/1.
using Rational = mpq_class;

BigInt factorial(unsigned n);
/// C(n, k); zero when k > n or n < 0.
BigInt binomial(long n, long k);
/// n (n-1) ... (n-k+1)
BigInt fallingFactorial(std::uint64_t n, unsigned k);

Rational makeRational(const BigInt& num, const BigInt& den);

/// "p/q", or "p" when the denominator is one.
std::string toString(const Rational& q);
std::string toString(const BigInt& z);

/// Prime factorization of |z| rendered as "2^3*5*7"; "1" for one.
std::string factorString(const BigInt& z);
/// Sign, factored numerator and factored denominator: "-3/(2^11*5*7^2*13)".
std::string factoredString(const Rational& q);

/// Parses "p/q", "p" or a terminating decimal such as "0.25" exactly.
Rational parseRational(const std::string& text);

double toDouble(const Rational& q);
double toDouble(const BigInt& z);

}  // namespace treepat
