#include <doctest.h>

#include "lumpbn/errors.hpp"
#include "lumpbn/rational.hpp"

using namespace lumpbn;

TEST_CASE("parse and print round trip") {
    CHECK(to_string(parse_rational("1/2")) == "1/2");
    CHECK(to_string(parse_rational("3")) == "3");
    CHECK(to_string(parse_rational("-7/3")) == "-7/3");
    CHECK(to_string(parse_rational("0")) == "0");
}

TEST_CASE("parsing canonicalizes") {
    CHECK(parse_rational("2/4") == parse_rational("1/2"));
    CHECK(to_string(parse_rational("2/4")) == "1/2");
    CHECK(to_string(parse_rational("4/2")) == "2");
    CHECK(parse_rational("0/5") == 0);
}

TEST_CASE("exact arithmetic has no drift") {
    Rational x = 0;
    for (int i = 0; i < 10; ++i) x += parse_rational("1/10");
    CHECK(x == 1);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS_AS(parse_rational(""), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("0.5"), Error);
    CHECK_THROWS_AS(parse_rational("a"), Error);
    CHECK_THROWS_AS(parse_rational("1/"), Error);
    CHECK_THROWS_AS(parse_rational("/2"), Error);
}
