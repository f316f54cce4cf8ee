#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace bellsim {

/// Point estimate with a frequentist plug-in standard error.
struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n = 0;

    /// |value - reference| in units of stderr; +inf when stderr is 0 and the
    /// values differ, 0 when they coincide exactly.
    double z_score(double reference) const {
        const double d = std::abs(value - reference);
        if (stderr_ > 0.0) return d / stderr_;
        return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
};

/// Counts of the four (+-1, +-1) outcome pairs of a coincidence run.
/// Accumulated in integers, merged component-wise; the correlation estimate
/// is read out in double only at the end.
struct PairSampleSummary {
    std::uint64_t n_pp = 0;
    std::uint64_t n_pm = 0;
    std::uint64_t n_mp = 0;
    std::uint64_t n_mm = 0;

    std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }

    void add(int a, int b) {
        if (a > 0)
            (b > 0 ? n_pp : n_pm)++;
        else
            (b > 0 ? n_mp : n_mm)++;
    }

    void merge(const PairSampleSummary& other) {
        n_pp += other.n_pp;
        n_pm += other.n_pm;
        n_mp += other.n_mp;
        n_mm += other.n_mm;
    }
};

/// E-hat = (n_pp + n_mm - n_pm - n_mp) / N with the +-1-product stderr
/// sqrt((1 - E^2)/N). Throws on an empty summary.
inline Estimate estimate_correlation(const PairSampleSummary& s) {
    const std::uint64_t n = s.total();
    if (n == 0) throw std::invalid_argument("estimate_correlation: empty summary");
    const double concord = static_cast<double>(s.n_pp + s.n_mm);
    const double discord = static_cast<double>(s.n_pm + s.n_mp);
    const double value = (concord - discord) / static_cast<double>(n);
    const double var = std::max(0.0, 1.0 - value * value);
    return {value, std::sqrt(var / static_cast<double>(n)), n};
}

/// Binomial proportion estimate with stderr sqrt(p(1-p)/n).
inline Estimate estimate_proportion(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("estimate_proportion: n = 0");
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)), n};
}

/// Hit counter for probability estimates.
struct CountSummary {
    std::uint64_t hits = 0;
    std::uint64_t n = 0;

    void add(bool hit) {
        hits += hit ? 1 : 0;
        n++;
    }
    void merge(const CountSummary& other) {
        hits += other.hits;
        n += other.n;
    }
    Estimate estimate() const { return estimate_proportion(hits, n); }
};

/// Running sum / sum-of-squares accumulator for real-valued per-trial
/// statistics. Merge order is fixed by the chunk layout, so results are
/// reproducible bit-for-bit.
struct MeanSummary {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        n++;
    }
    void merge(const MeanSummary& other) {
        sum += other.sum;
        sum_sq += other.sum_sq;
        n += other.n;
    }
    double mean() const { return sum / static_cast<double>(n); }
    double variance() const {
        const double m = mean();
        return std::max(0.0, sum_sq / static_cast<double>(n) - m * m);
    }
    Estimate estimate() const {
        if (n == 0) throw std::invalid_argument("MeanSummary: empty");
        return {mean(), std::sqrt(variance() / static_cast<double>(n)), n};
    }
};

} // namespace bellsim
