#include <gtest/gtest.h>

#include "treepat/rational.hpp"

using namespace treepat;

TEST(Rational, CombinatoricsBasics) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(10), 3628800);
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(2, 5), 0);
  EXPECT_EQ(binomial(-1, 0), 0);
  EXPECT_EQ(binomial(4, 0), 1);
  EXPECT_EQ(fallingFactorial(5, 3), 60);
  EXPECT_EQ(fallingFactorial(2, 3), 0);
}

TEST(Rational, CanonicalForm) {
  Rational q = makeRational(6, -4);
  EXPECT_EQ(toString(q), "-3/2");
  EXPECT_EQ(toString(makeRational(0, 7)), "0");
  EXPECT_EQ(toString(makeRational(8, 4)), "2");
}

TEST(Rational, Parse) {
  EXPECT_EQ(parseRational("3/6"), Rational(1, 2));
  EXPECT_EQ(parseRational("-7"), Rational(-7));
  EXPECT_EQ(parseRational("0.25"), Rational(1, 4));
  EXPECT_THROW(parseRational("1/0"), std::invalid_argument);
  EXPECT_THROW(parseRational("abc"), std::invalid_argument);
}

TEST(Rational, Factored) {
  EXPECT_EQ(factorString(BigInt(360)), "2^3*3^2*5");
  EXPECT_EQ(factorString(BigInt(1)), "1");
  EXPECT_EQ(factoredString(makeRational(-1, 3780)), "-1/(2^2*3^3*5*7)");
  EXPECT_EQ(factoredString(makeRational(43, 2 * 2 * 2 * 2 * 2 * 2 * 2 * 2 * 81 * 25 * 7 * 11)),
            "43/(2^8*3^4*5^2*7*11)");
  // Cofactor above the trial-division bound stays intact.
  BigInt big("1000000007");
  EXPECT_EQ(factorString(big * 4), "2^2*1000000007");
}
