#include <gtest/gtest.h>

#include "multipoint/rational.hpp"

using multipoint::Rational;

TEST(Rational, LowestTermsAndPositiveDenominator) {
  Rational r(6, -4);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rational(4, 2).str(), "2");
  EXPECT_EQ(Rational(0, 7).str(), "0");
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, Parse) {
  EXPECT_EQ(Rational::parse("3/9")->str(), "1/3");
  EXPECT_EQ(Rational::parse("-5")->str(), "-5");
  EXPECT_EQ(*Rational::parse("-2/4"), Rational(-1, 2));
  for (const char* bad : {"", "1/", "/2", "1/0", "1/-2", "+1", "1.5", "a", "1//2", "-"})
    EXPECT_FALSE(Rational::parse(bad)) << bad;
}

TEST(Rational, FloorAndFracOfNegatives) {
  EXPECT_EQ(Rational(-1, 3).floor(), Rational(-1));
  EXPECT_EQ(Rational(-1, 3).frac(), Rational(2, 3));
  EXPECT_EQ(Rational(7, 2).floor(), Rational(3));
  EXPECT_EQ(Rational(-2).frac(), Rational(0));
}

TEST(Rational, ArithmeticAndOrder) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, b);
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_LT(b, a);
  EXPECT_THROW(a / Rational(0), std::domain_error);
  // beyond 64-bit range
  Rational big = Rational(1);
  for (int i = 0; i < 200; ++i) big *= Rational(3, 2);
  EXPECT_GT(big, Rational(1000000000L) * Rational(1000000000L));
  EXPECT_EQ(big * Rational(2, 3) / big, Rational(2, 3));
}
