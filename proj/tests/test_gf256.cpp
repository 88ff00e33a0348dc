#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "odsim/gf256.hpp"

using namespace odsim;

TEST_CASE("addition has characteristic 2") {
    for (int x = 0; x < 256; ++x) {
        CHECK(gf::add(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(x)) == 0);
        CHECK(gf::add(static_cast<std::uint8_t>(x), 0) == x);
    }
}

TEST_CASE("multiplicative inverse law, exhaustive") {
    for (int x = 1; x < 256; ++x) {
        const auto inv = gf::inv(static_cast<std::uint8_t>(x));
        CHECK(gf::mul(static_cast<std::uint8_t>(x), inv) == 1);
    }
    CHECK_THROWS_AS(gf::inv(0), std::domain_error);
}

TEST_CASE("field laws over all 256^2 pairs") {
    for (int a = 0; a < 256; ++a) {
        for (int b = 0; b < 256; ++b) {
            const auto x = static_cast<std::uint8_t>(a);
            const auto y = static_cast<std::uint8_t>(b);
            CHECK(gf::mul(x, y) == gf::mul(y, x));
            CHECK(gf::mul(x, 1) == x);
            CHECK(gf::mul(x, 0) == 0);
        }
    }
}

TEST_CASE("distributivity, exhaustive over all 256^3 triples") {
    // feasible as the oracle: ~16.7M combinations of table lookups
    for (int a = 0; a < 256; ++a) {
        const auto x = static_cast<std::uint8_t>(a);
        for (int b = 0; b < 256; ++b) {
            const auto y = static_cast<std::uint8_t>(b);
            const auto xy = gf::mul(x, y);
            for (int c = 0; c < 256; ++c) {
                const auto z = static_cast<std::uint8_t>(c);
                if (gf::mul(x, gf::add(y, z)) != gf::add(xy, gf::mul(x, z))) {
                    REQUIRE(false);
                }
            }
        }
    }
    CHECK(true);
}

TEST_CASE("associativity on a spread of triples") {
    for (int a = 1; a < 256; a += 7) {
        for (int b = 1; b < 256; b += 5) {
            for (int c = 1; c < 256; c += 3) {
                const auto x = static_cast<std::uint8_t>(a);
                const auto y = static_cast<std::uint8_t>(b);
                const auto z = static_cast<std::uint8_t>(c);
                CHECK(gf::mul(gf::mul(x, y), z) == gf::mul(x, gf::mul(y, z)));
            }
        }
    }
}
