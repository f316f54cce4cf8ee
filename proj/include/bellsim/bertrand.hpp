#pragma once

#include <cstdint>
#include <utility>

#include "bellsim/parallel.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/stats.hpp"

namespace bellsim {

/// The three chord-sampling protocols of Bertrand's problem. Each is a
/// perfectly good reading of "a chord chosen at random" and each has its own
/// answer, which is the point.
enum class BertrandProtocol { RandomOffset, RandomEndpoints, RandomMidpoint };

/// A chord of the unit circle, by distance of its midpoint from the center
/// and the direction of the chord line. The outer radius is fixed at 1; the
/// question is scale-free.
struct Chord {
    double center_distance = 0.0;
    double direction_angle = 0.0; // in [0, pi)
};

/// Deterministic chord constructors, one per protocol parameterization.
Chord chord_from_offset(double signed_offset);
Chord chord_from_endpoint_angle(double phi);
Chord chord_from_midpoint(double radius, double theta);

Chord sample_chord(BertrandProtocol protocol, SeededStream& stream);

/// True iff the chord meets the concentric circle of radius 1/2 in at least
/// one point, i.e. center_distance <= 1/2 (tangency counts).
inline bool chord_cuts_inner(const Chord& chord) {
    return chord.center_distance <= 0.5;
}

/// Exact answer per protocol as a rational (num, den):
/// 1/2, 1/3, 1/4 for offset, endpoints, midpoint.
std::pair<int, int> analytic_probability(BertrandProtocol protocol);

Estimate estimate_probability(BertrandProtocol protocol, std::uint64_t n, const SeededStream& stream,
                              ExecutionPolicy policy = ExecutionPolicy::Parallel);

} // namespace bellsim
