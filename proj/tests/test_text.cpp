#include "doctest.h"
#include "vmap/text.hpp"

using namespace vmap::text;

TEST_CASE("parse_double is strict") {
    CHECK(parse_double("1.25") == 1.25);
    CHECK(parse_double("-0.5") == -0.5);
    CHECK(parse_double("+3") == 3.0);
    CHECK(parse_double("1e9") == 1e9);
    CHECK_FALSE(parse_double(""));
    CHECK_FALSE(parse_double("1.2x"));
    CHECK_FALSE(parse_double(" 1"));
}

TEST_CASE("format_plain never uses exponents") {
    CHECK(format_plain(123456789012.0) == "123456789012");
    CHECK(format_plain(1e15) == "1000000000000000");
    CHECK(format_plain(1.3) == "1.3");
    CHECK(format_plain(-0.0) == "0");
    CHECK(format_plain(0.0001) == "0.0001");
}

TEST_CASE("format_scaled4 trims") {
    CHECK(format_scaled4(0) == "0");
    CHECK(format_scaled4(-3300) == "-0.33");
    CHECK(format_scaled4(10000) == "1");
    CHECK(format_scaled4(-1) == "-0.0001");
    CHECK(format_scaled4(98901) == "9.8901");
}

TEST_CASE("split keeps empty fields") {
    auto parts = split("a\t\tb\t", '\t');
    REQUIRE(parts.size() == 4);
    CHECK(parts[1].empty());
    CHECK(parts[3].empty());
}
