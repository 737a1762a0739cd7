#include <random>

#include "doctest.h"
#include "lll/rational.hpp"
#include "support.hpp"

using lll::Rational;
using testing_support::Frac;

TEST_CASE("parse accepts integers and fractions") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse("6/8") == Rational(3, 4));
  CHECK(Rational::parse("6/8").to_string() == "3/4");
  CHECK(Rational::parse("0/5").is_zero());
}

TEST_CASE("parse rejects malformed text") {
  for (const char* bad : {"", "a", "1/", "/2", "1/0", "1.5", "1/2/3", " 1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Rational::parse(bad), lll::Error);
  }
  try {
    Rational::parse("1/0");
  } catch (const lll::Error& e) {
    CHECK(e.code() == lll::ErrorCode::parse_error);
  }
}

TEST_CASE("powers of two and dyadic test") {
  CHECK(Rational::pow2(-3) == Rational(1, 8));
  CHECK(Rational::pow2(4) == Rational(16));
  CHECK(Rational::pow2(0) == Rational(1));
  CHECK(Rational(3, 8).is_dyadic());
  CHECK(Rational(5).is_dyadic());
  CHECK_FALSE(Rational(1, 3).is_dyadic());
  CHECK_FALSE(Rational(1, 10).is_dyadic());
}

TEST_CASE("ceil and pow") {
  CHECK(lll::ceil(Rational(7, 2)) == 4);
  CHECK(lll::ceil(Rational(-7, 2)) == -3);
  CHECK(lll::ceil(Rational(4)) == 4);
  CHECK(lll::pow(Rational(3, 4), 4) == Rational(81, 256));
  CHECK(lll::pow(Rational(2, 3), 0) == Rational(1));
}

TEST_CASE("arithmetic agrees with an independent fraction type") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
  for (int trial = 0; trial < 2000; ++trial) {
    long a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    Rational x(a, b), y(c, d);
    Frac fx(a, b), fy(c, d);
    CHECK((x + y).to_string() == (fx + fy).str());
    CHECK((x - y).to_string() == (fx - fy).str());
    CHECK((x * y).to_string() == (fx * fy).str());
    CHECK((x <= y) == (fx <= fy));
  }
}

TEST_CASE("division by zero is an error") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), lll::Error);
  CHECK_THROWS_AS(Rational(1, 0), lll::Error);
}
