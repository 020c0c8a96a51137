#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "diskrig/io.hpp"

using namespace diskrig;

TEST_SUITE("io") {
    TEST_CASE("format_double survives a parse round trip") {
        for (double x : {0.0, 1.0, -1.5, 0.1, 1e-300, 12345.678901234567, -2.2250738585072014e-308}) {
            CHECK(std::stod(format_double(x)) == x);
        }
        CHECK(format_double(0.0) == "0");
        CHECK(format_double(2.0) == "2");
    }

    TEST_CASE("serialize then parse is the identity, bit for bit") {
        DiskPacking p;
        p.centers = {Vec2(0.1, -0.30000000000000004), Vec2(1.9999999999999998, 3.14)};
        p.radii = {0.7071067811865476, 1.0};

        const std::string text = packing_to_json(p);
        const PackingFile parsed = parse_packing(text);
        REQUIRE(parsed.packing.size() == 2);
        CHECK_FALSE(parsed.boundary.has_value());
        for (int i = 0; i < 2; ++i) {
            CHECK(parsed.packing.radii[i] == p.radii[i]);
            CHECK(parsed.packing.centers[i].x() == p.centers[i].x());
            CHECK(parsed.packing.centers[i].y() == p.centers[i].y());
        }

        // Deterministic writer: serializing the parse reproduces the bytes.
        CHECK(packing_to_json(parsed.packing) == text);
    }

    TEST_CASE("boundary triple round trips") {
        DiskPacking p;
        p.centers = {Vec2(0, 0), Vec2(2, 0), Vec2(1, 2), Vec2(1, 1)};
        p.radii = {1, 1, 1, 0.3};
        const std::string text = packing_to_json(p, std::array<int, 3>{0, 1, 2});
        const PackingFile parsed = parse_packing(text);
        REQUIRE(parsed.boundary.has_value());
        CHECK(*parsed.boundary == std::array<int, 3>{0, 1, 2});
    }

    TEST_CASE("malformed documents raise ParseError") {
        CHECK_THROWS_AS(parse_packing("not json"), ParseError);
        CHECK_THROWS_AS(parse_packing("{}"), ParseError);
        CHECK_THROWS_AS(parse_packing(R"({"radii": [1], "centers": [[0, 0], [2, 0]]})"),
                        ParseError);  // length mismatch
        CHECK_THROWS_AS(parse_packing(R"({"radii": [1, 1], "centers": [[0, 0], [2]]})"),
                        ParseError);  // center is not a pair
        CHECK_THROWS_AS(
            parse_packing(R"({"radii": [1, "x"], "centers": [[0, 0], [2, 0]]})"),
            ParseError);
        CHECK_THROWS_AS(
            parse_packing(
                R"({"radii": [1, 1, 1], "centers": [[0,0],[2,0],[1,2]], "boundary": [0, 1]})"),
            ParseError);  // boundary must have three entries
        CHECK_THROWS_AS(
            parse_packing(
                R"({"radii": [1, 1, 1], "centers": [[0,0],[2,0],[1,2]], "boundary": [0, 1, 1]})"),
            ParseError);  // distinct indices
        CHECK_THROWS_AS(
            parse_packing(
                R"({"radii": [1, 1, 1], "centers": [[0,0],[2,0],[1,2]], "boundary": [0, 1, 3]})"),
            ParseError);  // in range
    }

    TEST_CASE("save and load through a file") {
        DiskPacking p;
        p.centers = {Vec2(0, 0), Vec2(2, 0)};
        p.radii = {1, 1};
        const std::string path = "io_test_tmp.json";
        save_packing(path, p);
        const PackingFile back = load_packing(path);
        CHECK(back.packing.centers[1].x() == 2.0);
        std::remove(path.c_str());
        CHECK_THROWS_AS(load_packing(path), ParseError);
    }
}
