#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "bellsim/bertrand.hpp"

using namespace bellsim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("chord constructors") {
    CHECK(chord_from_offset(0.0).center_distance == 0.0);
    CHECK(chord_from_offset(-0.7).center_distance == doctest::Approx(0.7));

    CHECK(chord_from_endpoint_angle(kPi).center_distance == doctest::Approx(0.0));
    // phi = 2*pi/3 gives |cos(pi/3)| = 1/2 exactly up to rounding.
    CHECK(chord_from_endpoint_angle(2.0 * kPi / 3.0).center_distance == doctest::Approx(0.5));

    CHECK(chord_from_midpoint(0.25, 1.0).center_distance == 0.25);
    CHECK(chord_from_midpoint(0.0, 0.0).direction_angle == 0.0);
}

TEST_CASE("inner-circle cut predicate, tangency included") {
    CHECK(chord_cuts_inner({0.0, 0.0}));
    CHECK(chord_cuts_inner({0.5, 0.0}));
    CHECK_FALSE(chord_cuts_inner({0.5000000001, 0.0}));
    CHECK_FALSE(chord_cuts_inner({1.0, 0.0}));
}

TEST_CASE("analytic probabilities are 1/2, 1/3, 1/4 and pairwise distinct") {
    const auto off = analytic_probability(BertrandProtocol::RandomOffset);
    const auto end = analytic_probability(BertrandProtocol::RandomEndpoints);
    const auto mid = analytic_probability(BertrandProtocol::RandomMidpoint);
    CHECK(off == std::pair{1, 2});
    CHECK(end == std::pair{1, 3});
    CHECK(mid == std::pair{1, 4});
    CHECK(off != end);
    CHECK(end != mid);
    CHECK(off != mid);
}

TEST_CASE("Monte Carlo estimates agree with each protocol's analytic value") {
    const SeededStream stream(1);
    const std::uint64_t n = 200000;
    const struct {
        BertrandProtocol protocol;
        double expected;
    } cases[] = {
        {BertrandProtocol::RandomOffset, 0.5},
        {BertrandProtocol::RandomEndpoints, 1.0 / 3.0},
        {BertrandProtocol::RandomMidpoint, 0.25},
    };
    int idx = 0;
    for (const auto& c : cases) {
        const Estimate e = estimate_probability(c.protocol, n, stream.substream(idx++));
        CHECK(e.z_score(c.expected) < 5.0);
    }
}

TEST_CASE("midpoint protocol: chord midpoint radius has mean 2/3") {
    SeededStream s(11);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) sum += sample_chord(BertrandProtocol::RandomMidpoint, s).center_distance;
    const double mean = sum / n;
    // Var of r with density 2r is 1/18; 5 sigma band.
    const double sigma = std::sqrt(1.0 / 18.0 / n);
    CHECK(std::abs(mean - 2.0 / 3.0) < 5.0 * sigma);
}

TEST_CASE("single-trial estimate is 0 or 1; n = 0 rejected") {
    const SeededStream stream(5);
    const Estimate e = estimate_probability(BertrandProtocol::RandomEndpoints, 1, stream);
    CHECK((e.value == 0.0 || e.value == 1.0));
    CHECK_THROWS_AS(estimate_probability(BertrandProtocol::RandomOffset, 0, stream),
                    std::invalid_argument);
}

TEST_CASE("estimates are reproducible and independent of execution policy") {
    const SeededStream stream(77);
    const auto a =
        estimate_probability(BertrandProtocol::RandomOffset, 150000, stream, ExecutionPolicy::Serial);
    const auto b = estimate_probability(BertrandProtocol::RandomOffset, 150000, stream,
                                        ExecutionPolicy::Parallel);
    CHECK(a.value == b.value);
}
