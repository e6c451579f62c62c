#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "l1est/rng.hpp"

using namespace l1est;

TEST_CASE("philox: known-answer vectors", "[rng]") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("rng: splitmix finaliser", "[rng]") {
    CHECK(mix64(0) == 0xE220A8397B1DCDAFull);
    CHECK(mix64(1) != mix64(2));
}

TEST_CASE("rng: seed round trip and stream packing", "[rng]") {
    CHECK(CounterRng(0x0123456789abcdefull).seed() == 0x0123456789abcdefull);
    CHECK(stream_id(StreamDomain::Noise, 3, 7) == ((1ull << 56) | (3ull << 32) | 7ull));
    CHECK(stream_id(StreamDomain::Theta, 3, 7) != stream_id(StreamDomain::Noise, 3, 7));
}

TEST_CASE("rng: variates are pure functions of (seed, stream, index)", "[rng]") {
    const CounterRng a(99), b(99), c(100);
    for (std::uint64_t i = 0; i < 100; ++i) {
        CHECK(a.normal(5, i) == b.normal(5, i));
        CHECK(a.uniform(5, i) == b.uniform(5, i));
    }
    CHECK(a.normal(5, 0) != c.normal(5, 0));
    CHECK(a.normal(5, 0) != a.normal(6, 0));
}

TEST_CASE("rng: fill_normal matches pointwise access from any offset", "[rng]") {
    const CounterRng rng(3);
    for (std::uint64_t first : {0ull, 1ull, 10ull, 17ull}) {
        std::vector<double> out(9);
        rng.fill_normal(11, first, out);
        for (std::size_t j = 0; j < out.size(); ++j) CHECK(out[j] == rng.normal(11, first + j));
    }
}

TEST_CASE("rng: uniform range and normal moments", "[rng][property]") {
    const CounterRng rng(2024);
    const std::size_t N = 1000000;
    std::vector<double> z(N);
    rng.fill_normal(1, 0, z);
    double s = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double v : z) {
        s += v;
        s2 += v * v;
        s3 += v * v * v;
        s4 += v * v * v * v;
    }
    CHECK(std::fabs(s / N) < 5.0 / std::sqrt(N));
    CHECK(std::fabs(s2 / N - 1.0) < 5.0 * std::sqrt(2.0 / N));
    CHECK(std::fabs(s3 / N) < 5.0 * std::sqrt(15.0 / N));
    CHECK(std::fabs(s4 / N - 3.0) < 5.0 * std::sqrt(96.0 / N));

    double u_sum = 0.0, u_min = 1.0, u_max = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double u = rng.uniform(2, i);
        u_sum += u;
        u_min = std::min(u_min, u);
        u_max = std::max(u_max, u);
    }
    CHECK(u_min >= 0.0);
    CHECK(u_max < 1.0);
    CHECK(std::fabs(u_sum / N - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / N));
}
