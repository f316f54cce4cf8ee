// Compares the serial reference and the OpenMP chunked execution of the
// Monte Carlo kernels, and checks that both produce bit-identical summaries.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bellsim/bertrand.hpp"
#include "bellsim/collision.hpp"
#include "bellsim/hvmodels.hpp"

using namespace bellsim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Fn>
double timed(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return seconds_since(start);
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-24s serial %8.3fs   openmp %8.3fs   speedup %5.2fx   identical: %s\n", name,
                serial_s, parallel_s, serial_s / parallel_s, identical ? "yes" : "NO");
}

} // namespace

int main() {
    const std::uint64_t n = 20'000'000;
    const SeededStream stream(2024);

#ifdef _OPENMP
    std::printf("threads: %d, trials per kernel: %llu\n", omp_get_max_threads(),
                static_cast<unsigned long long>(n));
#else
    std::printf("built without OpenMP; both runs are serial\n");
#endif

    {
        Estimate serial, parallel;
        const double ts = timed([&] {
            serial = estimate_probability(BertrandProtocol::RandomMidpoint, n, stream,
                                          ExecutionPolicy::Serial);
        });
        const double tp = timed([&] {
            parallel = estimate_probability(BertrandProtocol::RandomMidpoint, n, stream,
                                            ExecutionPolicy::Parallel);
        });
        report("bertrand midpoint", ts, tp, serial.value == parallel.value);
    }

    {
        CollisionConfig config;
        const DetectorAssignment bc{ThresholdDetector::B(), ThresholdDetector::C()};
        PairSampleSummary serial, parallel;
        const double ts =
            timed([&] { serial = run_experiment(config, bc, n, stream, ExecutionPolicy::Serial); });
        const double tp = timed(
            [&] { parallel = run_experiment(config, bc, n, stream, ExecutionPolicy::Parallel); });
        report("collision B:C", ts, tp,
               serial.n_pp == parallel.n_pp && serial.n_pm == parallel.n_pm &&
                   serial.n_mp == parallel.n_mp && serial.n_mm == parallel.n_mm);
    }

    {
        const Context ctx = contextual_singlet(0.0, 1.0);
        PairSampleSummary serial, parallel;
        const double ts = timed(
            [&] { serial = simulate_coincidence(ctx, n, stream, ExecutionPolicy::Serial); });
        const double tp = timed(
            [&] { parallel = simulate_coincidence(ctx, n, stream, ExecutionPolicy::Parallel); });
        report("singlet coincidence", ts, tp,
               serial.n_pp == parallel.n_pp && serial.n_pm == parallel.n_pm &&
                   serial.n_mp == parallel.n_mp && serial.n_mm == parallel.n_mm);
    }

    {
        ScaledPairModel model{2.0, 3.0, DensitySpec::uniform(0.0, 1.0)};
        ScaledPairSampleSummary serial, parallel;
        const double ts =
            timed([&] { serial = scaled_pair_simulate(model, n, stream, ExecutionPolicy::Serial); });
        const double tp = timed(
            [&] { parallel = scaled_pair_simulate(model, n, stream, ExecutionPolicy::Parallel); });
        report("scaled pair", ts, tp,
               serial.sum_a == parallel.sum_a && serial.sum_b == parallel.sum_b &&
                   serial.sum_ab == parallel.sum_ab);
    }

    return 0;
}
