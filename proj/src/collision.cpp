#include "bellsim/collision.hpp"

#include <algorithm>
#include <stdexcept>

namespace bellsim {

void CollisionConfig::validate() const {
    if (!(m > 0.0) || !(M > m))
        throw std::invalid_argument("collision: need M > m > 0");
    if (!(restitution > 0.0) || restitution > 1.0)
        throw std::invalid_argument("collision: restitution must be in (0, 1]");
    if (!(restitution * M > m))
        throw std::invalid_argument("collision: light ball does not rebound (e*M <= m)");
    v_density.validate();
    if (v_density.lo < 0.0)
        throw std::invalid_argument("collision: speed density must be supported on positive speeds");
}

std::pair<double, double> collide(const CollisionConfig& config, double v) {
    if (!(v > 0.0)) throw std::invalid_argument("collide: speed must be positive");
    return {config.ratio_heavy() * v, config.ratio_light() * v};
}

ThresholdDetector ThresholdDetector::from_label(char label) {
    switch (label) {
        case 'A': return A();
        case 'B': return B();
        case 'C': return C();
    }
    throw std::invalid_argument(std::string("unknown detector label '") + label + "'");
}

int detect(const ThresholdDetector& detector, double speed) {
    if (!(speed > 0.0)) throw std::invalid_argument("detect: speed must be positive");
    return speed < detector.threshold ? detector.sign_below : -detector.sign_below;
}

PairSampleSummary run_experiment(const CollisionConfig& config, const DetectorAssignment& assignment,
                                 std::uint64_t n, const SeededStream& stream,
                                 ExecutionPolicy policy) {
    if (n == 0) throw std::invalid_argument("run_experiment: n = 0");
    config.validate();
    return run_chunked<PairSampleSummary>(
        stream, n,
        [&config, &assignment](SeededStream& sub, std::uint64_t count, PairSampleSummary& out) {
            for (std::uint64_t i = 0; i < count; ++i) {
                const double v = config.v_density.sample(sub);
                const auto [v1, v2] = collide(config, v);
                out.add(detect(assignment.at_d1, v1), detect(assignment.at_d2, v2));
            }
        },
        policy);
}

double analytic_E_BC(const CollisionConfig& config) {
    config.validate();
    // B(V1) C(V2) is +1 exactly when 2 <= V1 < 3; V1 = ratio_heavy * V.
    const double r = config.ratio_heavy();
    const double p_mid = config.v_density.cdf(3.0 / r) - config.v_density.cdf(2.0 / r);
    return 2.0 * p_mid - 1.0;
}

BellTripleReport check_bell_triple(double e_ab, double e_ac, double e_bc) {
    for (double e : {e_ab, e_ac, e_bc})
        if (e < -1.0 || e > 1.0)
            throw std::invalid_argument("check_bell_triple: correlation outside [-1, 1]");
    BellTripleReport report;
    report.lhs = std::abs(e_ab - e_ac);
    report.rhs_plus = 1.0 + e_bc;
    report.rhs_minus = 1.0 - e_bc;
    report.violated_plus = report.lhs > report.rhs_plus;
    report.violated_minus = report.lhs > report.rhs_minus;
    report.margin = report.lhs - std::min(report.rhs_plus, report.rhs_minus);
    return report;
}

OrderAsymmetry order_asymmetry(const CollisionConfig& config, std::uint64_t n,
                               const SeededStream& stream, ExecutionPolicy policy) {
    const DetectorAssignment ab{ThresholdDetector::A(), ThresholdDetector::B()};
    const DetectorAssignment ba{ThresholdDetector::B(), ThresholdDetector::A()};
    return {estimate_correlation(run_experiment(config, ab, n, stream.substream(0), policy)),
            estimate_correlation(run_experiment(config, ba, n, stream.substream(1), policy))};
}

} // namespace bellsim
