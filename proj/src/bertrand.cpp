#include "bellsim/bertrand.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellsim {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap_direction(double angle) {
    double a = std::fmod(angle, kPi);
    if (a < 0.0) a += kPi;
    return a;
}
} // namespace

Chord chord_from_offset(double signed_offset) {
    return {std::abs(signed_offset), kPi / 2.0};
}

Chord chord_from_endpoint_angle(double phi) {
    // One endpoint pinned at angle 0, the other at phi.
    return {std::abs(std::cos(phi / 2.0)), wrap_direction(phi / 2.0 + kPi / 2.0)};
}

Chord chord_from_midpoint(double radius, double theta) {
    if (radius == 0.0) return {0.0, 0.0}; // direction undefined at the center
    return {radius, wrap_direction(theta + kPi / 2.0)};
}

Chord sample_chord(BertrandProtocol protocol, SeededStream& stream) {
    switch (protocol) {
        case BertrandProtocol::RandomOffset:
            // Sub-ensemble of parallel chords: signed offset uniform on (-1, 1).
            return chord_from_offset(stream.uniform(-1.0, 1.0));
        case BertrandProtocol::RandomEndpoints:
            return chord_from_endpoint_angle(stream.uniform(0.0, 2.0 * kPi));
        case BertrandProtocol::RandomMidpoint:
            // Midpoint uniform over the disk.
            return chord_from_midpoint(std::sqrt(stream.next_unit_open()),
                                       stream.uniform(0.0, 2.0 * kPi));
    }
    throw std::logic_error("sample_chord: bad protocol");
}

std::pair<int, int> analytic_probability(BertrandProtocol protocol) {
    switch (protocol) {
        case BertrandProtocol::RandomOffset: return {1, 2};
        case BertrandProtocol::RandomEndpoints: return {1, 3};
        case BertrandProtocol::RandomMidpoint: return {1, 4};
    }
    throw std::logic_error("analytic_probability: bad protocol");
}

Estimate estimate_probability(BertrandProtocol protocol, std::uint64_t n, const SeededStream& stream,
                              ExecutionPolicy policy) {
    if (n == 0) throw std::invalid_argument("estimate_probability: n = 0");
    auto summary = run_chunked<CountSummary>(
        stream, n,
        [protocol](SeededStream& sub, std::uint64_t count, CountSummary& out) {
            for (std::uint64_t i = 0; i < count; ++i)
                out.add(chord_cuts_inner(sample_chord(protocol, sub)));
        },
        policy);
    return summary.estimate();
}

} // namespace bellsim
