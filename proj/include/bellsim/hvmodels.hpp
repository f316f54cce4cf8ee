#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bellsim/density.hpp"
#include "bellsim/parallel.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/stats.hpp"

namespace bellsim {

/// Measurement setting: a small integer id, optionally carrying the
/// orientation angle (radians) it represents.
struct SettingLabel {
    int id = 0;
    std::optional<double> angle;
};

/// Exact joint distribution over the four (+-1, +-1) outcome pairs.
struct JointDistribution {
    double p_pp = 0.0;
    double p_pm = 0.0;
    double p_mp = 0.0;
    double p_mm = 0.0;

    double correlation() const { return p_pp + p_mm - p_pm - p_mp; }
    double marginal_a_plus() const { return p_pp + p_pm; }
    double marginal_b_plus() const { return p_pp + p_mp; }
};

/// Hidden-variable model with one lambda space shared by every setting pair
/// and per-wing response probabilities: P(a,b|x,y) = sum_l P(l) P(a|x,l) P(b|y,l).
/// The deterministic special case (all responses 0 or 1) realizes the
/// two-valued-function models A(l), B(l) = +-1.
struct FiniteNoncontextualModel {
    std::vector<double> weights;                 // P(lambda), sums to 1
    std::vector<std::vector<double>> response_a; // [setting][lambda] = P(a=+1 | x, lambda)
    std::vector<std::vector<double>> response_b; // [setting][lambda] = P(b=+1 | y, lambda)

    std::size_t n_lambdas() const { return weights.size(); }
    std::size_t n_settings_a() const { return response_a.size(); }
    std::size_t n_settings_b() const { return response_b.size(); }
    bool is_deterministic() const;
    void validate() const;

    /// Independent fair coins on both wings, any number of settings.
    static FiniteNoncontextualModel fair_coins(int settings_a = 2, int settings_b = 2);

    /// Random interior point of the model polytope: weights from normalized
    /// uniform draws, responses uniform on [0,1].
    static FiniteNoncontextualModel random(std::size_t lambdas, int settings_a, int settings_b,
                                           SeededStream& stream);
};

JointDistribution joint_from_noncontextual(const FiniteNoncontextualModel& model, int x, int y);

/// One atom of a per-context hidden-variable space. The outcome map is
/// deterministic per atom; atoms sharing a pair_component describe the same
/// source pair combined with different instrument-variable values, which is
/// what the protocol simulator holds fixed versus redraws.
struct ContextAtom {
    int a = 1;  // +-1
    int b = 1;  // +-1
    double weight = 0.0;
    int pair_component = -1; // -1: unique to this atom
};

struct Context {
    std::vector<ContextAtom> atoms;

    void validate() const;
    JointDistribution joint() const;
};

/// Per-setting-pair probability spaces: each pair (x, y) has its own Lambda_xy
/// and distribution, so no common joint across incompatible pairs is implied.
struct ContextualModel {
    std::map<std::pair<int, int>, Context> contexts;

    const Context& context_for(int x, int y) const;
    void validate() const;
};

/// Context whose four deterministic atoms carry the singlet joint weights
/// P(a,b) = (1 - a*b*cos(x_angle - y_angle))/4.
Context contextual_singlet(double x_angle, double y_angle);

/// Spin-1/2 singlet convention: E(a,b) = -cos(x_angle - y_angle).
inline double singlet_correlation(double x_angle, double y_angle) {
    return -std::cos(x_angle - y_angle);
}

PairSampleSummary simulate_coincidence(const FiniteNoncontextualModel& model, int x, int y,
                                       std::uint64_t n, const SeededStream& stream,
                                       ExecutionPolicy policy = ExecutionPolicy::Parallel);
PairSampleSummary simulate_coincidence(const Context& context, std::uint64_t n,
                                       const SeededStream& stream,
                                       ExecutionPolicy policy = ExecutionPolicy::Parallel);
PairSampleSummary simulate_coincidence(const ContextualModel& model, int x, int y, std::uint64_t n,
                                       const SeededStream& stream,
                                       ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// The factorization protocol: per emitted pair, draw lambda once and hold
/// it, estimate each wing's outcome probability from n_repeats independent
/// re-measurements, multiply the wing estimates, and average the implied
/// correlation over pairs. For contexts, what is held per pair is the
/// pair_component; instrument variables are redrawn on every repeat.
Estimate simulate_bell_protocol(const FiniteNoncontextualModel& model, int x, int y,
                                std::uint64_t n_pairs, std::uint64_t n_repeats,
                                const SeededStream& stream,
                                ExecutionPolicy policy = ExecutionPolicy::Parallel);
Estimate simulate_bell_protocol(const Context& context, std::uint64_t n_pairs,
                                std::uint64_t n_repeats, const SeededStream& stream,
                                ExecutionPolicy policy = ExecutionPolicy::Parallel);
Estimate simulate_bell_protocol(const ContextualModel& model, int x, int y, std::uint64_t n_pairs,
                                std::uint64_t n_repeats, const SeededStream& stream,
                                ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// E values keyed by setting pair.
struct CorrelationTable {
    std::map<std::pair<int, int>, double> entries;

    double at(int x, int y) const;
    void set(int x, int y, double e);
};

/// S = E(x1,y1) - E(x1,y2) + E(x2,y1) + E(x2,y2).
double chsh_value(const CorrelationTable& table, int x1, int x2, int y1, int y2);

/// S of one deterministic local strategy (a1, a2, b1, b2 in {-1,+1}).
double chsh_of_strategy(int a1, int a2, int b1, int b2);

/// max |S| over all 16 deterministic local strategies; equals 2.
double max_chsh_over_deterministic();

/// A = s*C, B = t*C with C drawn from a closed-form density: the minimal
/// common-history model. The joint density is the marginal density times a
/// delta pinning (A, B) to the line t*A = s*B.
struct ScaledPairModel {
    double s = 1.0;
    double t = 1.0;
    DensitySpec c_density = DensitySpec::uniform(0.0, 1.0);

    void validate() const;
};

struct ScaledPairMoments {
    double e_a = 0.0;
    double e_b = 0.0;
    double e_ab = 0.0;
    double cov = 0.0;
};

/// Closed-form moments: E[A] = s E[C], E[B] = t E[C], E[AB] = s t E[C^2],
/// Cov = s t Var[C].
ScaledPairMoments scaled_pair_moments(const ScaledPairModel& model);

struct ScaledPairSampleSummary {
    double sum_a = 0.0;
    double sum_b = 0.0;
    double sum_ab = 0.0;
    std::uint64_t n = 0;
    double max_line_residual = 0.0; // max |s*B - t*A| over trials

    void merge(const ScaledPairSampleSummary& other);
    double mean_a() const { return sum_a / static_cast<double>(n); }
    double mean_b() const { return sum_b / static_cast<double>(n); }
    double mean_ab() const { return sum_ab / static_cast<double>(n); }
    double cov() const { return mean_ab() - mean_a() * mean_b(); }
};

ScaledPairSampleSummary scaled_pair_simulate(const ScaledPairModel& model, std::uint64_t n,
                                             const SeededStream& stream,
                                             ExecutionPolicy policy = ExecutionPolicy::Parallel);

} // namespace bellsim
