#include <gtest/gtest.h>

#include "streamshare/rational.hpp"

namespace ss = streamshare;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(ss::parse_rational("9/5"), ss::Rational(9, 5));
  EXPECT_EQ(ss::parse_rational("4/2"), ss::Rational(2));
  EXPECT_EQ(ss::parse_rational("-3"), ss::Rational(-3));
  EXPECT_EQ(ss::parse_rational("0.125"), ss::Rational(1, 8));
  EXPECT_EQ(ss::parse_rational(" 7 "), ss::Rational(7));
}

TEST(Rational, RejectsMalformedInput) {
  EXPECT_THROW(ss::parse_rational(""), std::invalid_argument);
  EXPECT_THROW(ss::parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(ss::parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(ss::parse_rational("1/2/3"), std::invalid_argument);
}

TEST(Rational, RendersLowestTerms) {
  EXPECT_EQ(ss::to_string(ss::parse_rational("10/50")), "1/5");
  EXPECT_EQ(ss::to_string(ss::Rational(6)), "6");
  EXPECT_EQ(ss::to_string(ss::Rational(-3, 4)), "-3/4");
}

TEST(Rational, DecimalDisplayRoundsHalfUp) {
  // The one-decimal displays of the three-user example.
  EXPECT_EQ(ss::to_decimal(ss::Rational(9, 8), 1), "1.1");
  EXPECT_EQ(ss::to_decimal(ss::Rational(15, 8), 1), "1.9");
  EXPECT_EQ(ss::to_decimal(ss::Rational(5, 8), 1), "0.6");
  EXPECT_EQ(ss::to_decimal(ss::Rational(19, 8), 1), "2.4");
  EXPECT_EQ(ss::to_decimal(ss::Rational(3, 10), 1), "0.3");
  EXPECT_EQ(ss::to_decimal(ss::Rational(1, 20), 1), "0.1");
  EXPECT_EQ(ss::to_decimal(ss::Rational(1, 3), 4), "0.3333");
  EXPECT_EQ(ss::to_decimal(ss::Rational(2), 0), "2");
  EXPECT_EQ(ss::to_decimal(ss::Rational(-1, 20), 1), "-0.1");
  EXPECT_EQ(ss::to_decimal(ss::Rational(1, 1000), 2), "0.00");
}

TEST(Rational, RoundTripThroughText) {
  for (int num = -12; num <= 12; ++num)
    for (int den = 1; den <= 9; ++den) {
      ss::Rational x(num, den);
      x.canonicalize();
      EXPECT_EQ(ss::parse_rational(ss::to_string(x)), x);
    }
}
