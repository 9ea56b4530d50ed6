#include <doctest.h>

#include "patsched/rational.hpp"

using patsched::parse_rational;
using patsched::Rational;
using patsched::to_decimal;

TEST_CASE("decimal rendering") {
    CHECK(to_decimal(Rational(14)) == "14");
    CHECK(to_decimal(Rational(-5)) == "-5");
    CHECK(to_decimal(Rational(0)) == "0");
    CHECK(to_decimal(Rational(3, 2)) == "1.5");
    CHECK(to_decimal(Rational(-3, 2)) == "-1.5");
    CHECK(to_decimal(Rational(1, 3)) == "0.333333");
    CHECK(to_decimal(Rational(2, 3)) == "0.666667");
    CHECK(to_decimal(Rational(-2, 3)) == "-0.666667");
    CHECK(to_decimal(Rational(1, 8)) == "0.125");
    CHECK(to_decimal(Rational(1, 3000000)) == "0");
    CHECK(to_decimal(Rational(-1, 3000000)) == "0");
    CHECK(to_decimal(Rational(1999999, 2000000)) == "1");
}

TEST_CASE("fraction text round-trips") {
    for (auto value : {Rational(7), Rational(-7), Rational(7, 2), Rational(-1, 3)}) {
        CHECK(parse_rational(patsched::to_fraction_text(value)) == value);
    }
    CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x/2"), std::invalid_argument);
}
