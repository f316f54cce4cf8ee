#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bellsim/parallel.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/stats.hpp"

using namespace bellsim;

TEST_CASE("substream derivation extends the path") {
    const SeededStream root(42);
    CHECK(root.path().empty());

    const SeededStream child = derive_substream(root, 0);
    CHECK(child.root_seed() == 42);
    CHECK(child.path() == std::vector<std::uint64_t>{0});

    const SeededStream grandchild = derive_substream(child, 3);
    CHECK(grandchild.path() == std::vector<std::uint64_t>{0, 3});
}

TEST_CASE("same (seed, path) replays the same sequence") {
    SeededStream a = SeededStream(42).substream(0).substream(3);
    SeededStream b = SeededStream(42).substream(0).substream(3);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derivation leaves the parent untouched and siblings differ") {
    SeededStream root(7);
    SeededStream before = root;
    (void)root.substream(5);
    CHECK(before.next_u64() == root.next_u64());

    SeededStream s0 = root.substream(0);
    SeededStream s1 = root.substream(1);
    int equal = 0;
    for (int i = 0; i < 64; ++i)
        if (s0.next_u64() == s1.next_u64()) equal++;
    CHECK(equal == 0);
}

TEST_CASE("unit draws are in the open interval and roughly uniform") {
    SeededStream s(123);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = s.next_unit_open();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("correlation estimates from count summaries") {
    CHECK(estimate_correlation({3, 0, 0, 2}).value == 1.0);
    CHECK(estimate_correlation({3, 0, 0, 2}).stderr_ == 0.0);

    CHECK(estimate_correlation({0, 4, 4, 0}).value == -1.0);
    CHECK(estimate_correlation({0, 4, 4, 0}).stderr_ == 0.0);

    const Estimate e = estimate_correlation({25, 25, 25, 25});
    CHECK(e.value == 0.0);
    CHECK(e.stderr_ == doctest::Approx(0.1));

    CHECK_THROWS_AS(estimate_correlation({}), std::invalid_argument);
}

TEST_CASE("summary merge is associative and commutative, estimate matches pooled counts") {
    SeededStream s(9);
    for (int rep = 0; rep < 50; ++rep) {
        auto random_summary = [&] {
            return PairSampleSummary{s.next_u64() % 100, s.next_u64() % 100, s.next_u64() % 100,
                                     s.next_u64() % 100 + 1};
        };
        const PairSampleSummary a = random_summary();
        const PairSampleSummary b = random_summary();
        const PairSampleSummary c = random_summary();

        PairSampleSummary ab_c = a;
        ab_c.merge(b);
        ab_c.merge(c);
        PairSampleSummary a_bc = b;
        a_bc.merge(c);
        a_bc.merge(a);
        CHECK(ab_c.n_pp == a_bc.n_pp);
        CHECK(ab_c.n_pm == a_bc.n_pm);
        CHECK(ab_c.n_mp == a_bc.n_mp);
        CHECK(ab_c.n_mm == a_bc.n_mm);

        const Estimate e = estimate_correlation(ab_c);
        CHECK(std::abs(e.value) <= 1.0);
        CHECK(e.n == a.total() + b.total() + c.total());
    }
}

TEST_CASE("chunked execution: serial and parallel are bit-identical") {
    const SeededStream stream(2718);
    auto kernel = [](SeededStream& sub, std::uint64_t count, PairSampleSummary& out) {
        for (std::uint64_t i = 0; i < count; ++i)
            out.add(sub.bernoulli(0.3) ? 1 : -1, sub.bernoulli(0.7) ? 1 : -1);
    };
    // Straddles several chunk boundaries.
    const std::uint64_t n = 3 * kChunkTrials + 17;
    const auto serial = run_chunked<PairSampleSummary>(stream, n, kernel, ExecutionPolicy::Serial);
    const auto parallel =
        run_chunked<PairSampleSummary>(stream, n, kernel, ExecutionPolicy::Parallel);
    CHECK(serial.n_pp == parallel.n_pp);
    CHECK(serial.n_pm == parallel.n_pm);
    CHECK(serial.n_mp == parallel.n_mp);
    CHECK(serial.n_mm == parallel.n_mm);
    CHECK(serial.total() == n);
}

TEST_CASE("proportion estimate") {
    const Estimate e = estimate_proportion(25, 100);
    CHECK(e.value == 0.25);
    CHECK(e.stderr_ == doctest::Approx(std::sqrt(0.25 * 0.75 / 100)));
    CHECK_THROWS_AS(estimate_proportion(0, 0), std::invalid_argument);
}
