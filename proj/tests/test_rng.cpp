#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bussgang/rng.hpp"

using namespace bussgang;

TEST_CASE("philox4x32-10 known-answer vectors", "[rng]") {
    // Reference outputs from the Random123 test vectors.
    auto r = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(r[0] == 0x6627e8d5u);
    CHECK(r[1] == 0xe169c58du);
    CHECK(r[2] == 0xbc57ac4cu);
    CHECK(r[3] == 0x9b00dbd8u);

    r = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
    CHECK(r[0] == 0x408f276du);
    CHECK(r[1] == 0x41c83b0eu);
    CHECK(r[2] == 0xa20bc7c6u);
    CHECK(r[3] == 0x6d5451fdu);

    r = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
    CHECK(r[0] == 0xd16cfe09u);
    CHECK(r[1] == 0x94fdccebu);
    CHECK(r[2] == 0x5001e420u);
    CHECK(r[3] == 0x24126ea1u);
}

TEST_CASE("uniforms stay inside (0,1) and look uniform", "[rng]") {
    CounterRng rng(42, StreamDomain::sample, 0);
    double sum = 0.0;
    double min = 1.0;
    double max = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        min = std::min(min, u);
        max = std::max(max, u);
    }
    CHECK(std::abs(sum / n - 0.5) < 5.0 * 0.2887 / std::sqrt(n));
    CHECK(min < 1e-4);
    CHECK(max > 1.0 - 1e-4);
}

TEST_CASE("normals have unit variance", "[rng]") {
    CounterRng rng(7, StreamDomain::mc_expect, 3);
    double sum = 0.0;
    double ss = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        ss += z * z;
    }
    CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(ss / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("streams are reproducible and distinct", "[rng]") {
    CounterRng a(11, StreamDomain::verify, 5);
    CounterRng b(11, StreamDomain::verify, 5);
    CounterRng c(11, StreamDomain::verify, 6);
    CounterRng d(11, StreamDomain::sample, 5);
    bool differs_stream = false;
    bool differs_domain = false;
    for (int i = 0; i < 64; ++i) {
        const double ua = a.uniform();
        REQUIRE(ua == b.uniform());
        differs_stream = differs_stream || ua != c.uniform();
        differs_domain = differs_domain || ua != d.uniform();
    }
    CHECK(differs_stream);
    CHECK(differs_domain);
}
