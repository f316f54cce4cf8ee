#pragma once

#include <cstdint>
#include <utility>

#include "bellsim/density.hpp"
#include "bellsim/parallel.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/stats.hpp"

namespace bellsim {

/// Head-on collision of a light ball (mass m, incoming speed V) with a heavy
/// ball (mass M) at rest. After the collision the heavy ball moves with V1
/// and the light ball rebounds with V2.
struct CollisionConfig {
    double m = 1.0;
    double M = 4.0;
    DensitySpec v_density = DensitySpec::uniform(0.0, 10.0);
    double restitution = 1.0; // in (0, 1]

    void validate() const;

    /// V1 / V (heavy ball); 2m/(m+M) in the elastic case.
    double ratio_heavy() const { return m * (1.0 + restitution) / (m + M); }
    /// V2 / V (light ball rebound); (M-m)/(m+M) in the elastic case.
    double ratio_light() const { return (restitution * M - m) / (m + M); }
};

/// Post-collision speeds (V1 heavy, V2 light). Throws on v <= 0.
std::pair<double, double> collide(const CollisionConfig& config, double v);

/// Step detector: outputs sign_below for speeds strictly below the
/// threshold and -sign_below at or above it (the boundary takes the ">="
/// branch).
struct ThresholdDetector {
    char label = 'A';
    double threshold = 2.0;
    int sign_below = -1;

    static ThresholdDetector A() { return {'A', 2.0, -1}; }
    static ThresholdDetector B() { return {'B', 3.0, -1}; }
    static ThresholdDetector C() { return {'C', 3.0, +1}; }
    static ThresholdDetector from_label(char label);
};

/// +-1 outcome of a detector applied to a speed. Throws on speed <= 0.
int detect(const ThresholdDetector& detector, double speed);

/// Which detector sits at which measuring device: at_d1 reads the heavy
/// ball's V1, at_d2 the light ball's V2.
struct DetectorAssignment {
    ThresholdDetector at_d1;
    ThresholdDetector at_d2;
};

PairSampleSummary run_experiment(const CollisionConfig& config, const DetectorAssignment& assignment,
                                 std::uint64_t n, const SeededStream& stream,
                                 ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Closed form for E(BC) with B at D1 and C at D2: since C = -B pointwise
/// and the step positions align, E(BC) = 2*P(2 <= V1 < 3) - 1, evaluated
/// through the CDF of the speed density.
double analytic_E_BC(const CollisionConfig& config);

/// |E(AB) - E(AC)| <= 1 + E(BC) and the 1 - E(BC) variant.
struct BellTripleReport {
    double lhs = 0.0;
    double rhs_plus = 0.0;
    double rhs_minus = 0.0;
    bool violated_plus = false;
    bool violated_minus = false;
    double margin = 0.0; // lhs - min(rhs_plus, rhs_minus)
};

BellTripleReport check_bell_triple(double e_ab, double e_ac, double e_bc);

struct OrderAsymmetry {
    Estimate e_ab;
    Estimate e_ba;
};

/// E with (A at D1, B at D2) versus the swapped order (B at D1, A at D2).
OrderAsymmetry order_asymmetry(const CollisionConfig& config, std::uint64_t n,
                               const SeededStream& stream,
                               ExecutionPolicy policy = ExecutionPolicy::Parallel);

} // namespace bellsim
