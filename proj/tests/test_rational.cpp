#include <catch2/catch_amalgamated.hpp>

#include <iffquant/rational.hpp>

using namespace iffquant;

TEST_CASE("rationals are canonically reduced") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(-4, -8) == Rational(1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(6, 3).to_string() == "2");
    CHECK(Rational(-1, 3).to_string() == "-1/3");
}

TEST_CASE("parse round trip") {
    for (const char* s : {"0", "5", "-7", "1/3", "-22/7", "123456789123456789/2"}) {
        const Rational r = Rational::parse(s);
        CHECK(r.to_string() == s);
        CHECK(Rational::parse(r.to_string()) == r);
    }
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
}

TEST_CASE("field arithmetic") {
    const Rational a(1, 6), b(3, 4);
    CHECK(a + b == Rational(11, 12));
    CHECK(a - b == Rational(-7, 12));
    CHECK(a * b == Rational(1, 8));
    CHECK(a / b == Rational(2, 9));
    CHECK(-a == Rational(-1, 6));
    CHECK(a.inverse() == Rational(6));
    CHECK(a < b);
    CHECK(Rational(-2).abs() == Rational(2));
    CHECK_THROWS_AS(a / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(0).inverse(), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("big values stay exact") {
    Rational x(1, 3);
    for (int i = 0; i < 64; ++i) x *= Rational(10, 7);
    Rational y = x;
    for (int i = 0; i < 64; ++i) y *= Rational(7, 10);
    CHECK(y == Rational(1, 3));
}
