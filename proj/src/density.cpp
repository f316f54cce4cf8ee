#include "bellsim/density.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace bellsim {

DensitySpec DensitySpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3)
        throw std::invalid_argument("density: expected family:lo:hi, got '" + text + "'");

    DensitySpec spec;
    if (parts[0] == "uniform")
        spec.family = Family::Uniform;
    else if (parts[0] == "triangular")
        spec.family = Family::Triangular;
    else
        throw std::invalid_argument("density: unknown family '" + parts[0] + "'");
    spec.lo = std::stod(parts[1]);
    spec.hi = std::stod(parts[2]);
    spec.validate();
    return spec;
}

double DensitySpec::mean() const {
    return 0.5 * (lo + hi);
}

double DensitySpec::second_moment() const {
    const double w = hi - lo;
    switch (family) {
        case Family::Uniform:
            return (lo * lo + lo * hi + hi * hi) / 3.0;
        case Family::Triangular: {
            const double m = mean();
            return m * m + w * w / 24.0;
        }
    }
    throw std::logic_error("DensitySpec: bad family");
}

double DensitySpec::cdf(double x) const {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double w = hi - lo;
    switch (family) {
        case Family::Uniform:
            return (x - lo) / w;
        case Family::Triangular: {
            const double mid = mean();
            if (x <= mid) {
                const double d = x - lo;
                return 2.0 * d * d / (w * w);
            }
            const double d = hi - x;
            return 1.0 - 2.0 * d * d / (w * w);
        }
    }
    throw std::logic_error("DensitySpec: bad family");
}

double DensitySpec::sample(SeededStream& stream) const {
    switch (family) {
        case Family::Uniform:
            return stream.uniform(lo, hi);
        case Family::Triangular: {
            // Sum of two uniform halves has the symmetric triangular law.
            const double u1 = stream.next_unit_open();
            const double u2 = stream.next_unit_open();
            return lo + (hi - lo) * 0.5 * (u1 + u2);
        }
    }
    throw std::logic_error("DensitySpec: bad family");
}

std::string DensitySpec::to_string() const {
    std::ostringstream out;
    out << (family == Family::Uniform ? "uniform" : "triangular") << ":" << lo << ":" << hi;
    return out.str();
}

} // namespace bellsim
