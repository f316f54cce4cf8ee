#pragma once

#include <stdexcept>
#include <string>

#include "bellsim/rng.hpp"

namespace bellsim {

/// Closed-form density family on an interval. Uniform(lo, hi) or the
/// symmetric Triangular(lo, hi) with its mode at the midpoint.
struct DensitySpec {
    enum class Family { Uniform, Triangular };

    Family family = Family::Uniform;
    double lo = 0.0;
    double hi = 1.0;

    static DensitySpec uniform(double lo, double hi) { return {Family::Uniform, lo, hi}; }
    static DensitySpec triangular(double lo, double hi) { return {Family::Triangular, lo, hi}; }

    /// Parses "uniform:lo:hi" or "triangular:lo:hi".
    static DensitySpec parse(const std::string& text);

    // lo == hi is the degenerate point mass.
    void validate() const {
        if (!(lo <= hi)) throw std::invalid_argument("DensitySpec: need lo <= hi");
    }

    double mean() const;
    double second_moment() const;
    double variance() const { return second_moment() - mean() * mean(); }

    /// P(X <= x).
    double cdf(double x) const;

    double sample(SeededStream& stream) const;

    std::string to_string() const;
};

} // namespace bellsim
