#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"

using namespace treegaze;

TEST_SUITE("csv") {
    TEST_CASE("quoted fields and escaping round-trip") {
        const auto f = csv::split_line(R"(a,"b,c","d ""q""",)", 1);
        REQUIRE(f.size() == 4);
        CHECK(f[1] == "b,c");
        CHECK(f[2] == "d \"q\"");
        CHECK(f[3].empty());
        CHECK(csv::escape("plain") == "plain");
        CHECK(csv::split_line(csv::escape("x,\"y\""), 1).at(0) == "x,\"y\"");
    }

    TEST_CASE("strict numbers") {
        CHECK(csv::to_double("1.5", "c", 1) == 1.5);
        CHECK(csv::to_double("-2e3", "c", 1) == -2000.0);
        CHECK_THROWS_AS(csv::to_double("1.5x", "c", 1), ParseError);
        CHECK_THROWS_AS(csv::to_double("", "c", 1), ParseError);
        CHECK_THROWS_AS(csv::to_integer("3.0", "c", 1), ParseError);
        CHECK(csv::to_integer("42", "c", 1) == 42);
    }

    TEST_CASE("format_double round-trips") {
        for (double v : {0.1, 1.0 / 3.0, -1e-300, 123456789.125, 2.0}) CHECK(std::stod(csv::format_double(v)) == v);
        CHECK(csv::format_double(2.0) == "2");
    }

    TEST_CASE("reader checks field counts") {
        std::istringstream in("a,b\n1,2\n3\n");
        csv::Reader r(in);
        REQUIRE(r.read_header());
        CHECK(r.next()->fields.size() == 2);
        CHECK_THROWS_AS(r.next(), ParseError);
    }
}
