#pragma once

#include <cstdint>
#include <vector>

namespace bellsim {

/// SplitMix64 finalizer (Steele, Lea & Flood / Vigna). Bijective on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based splittable random stream.
///
/// A stream is identified by (root_seed, path); the path is the sequence of
/// substream indices taken from the root. The key is a digest of the pair,
/// and the i-th output is a pure function of (key, i), so substream
/// derivation is O(1) and the same (seed, path) always replays the same
/// sequence regardless of how work was split across threads.
class SeededStream {
public:
    explicit SeededStream(std::uint64_t root_seed)
        : root_seed_(root_seed), key_(mix64(root_seed ^ kRootSalt)) {}

    /// Child stream whose path is this stream's path extended by `index`.
    [[nodiscard]] SeededStream substream(std::uint64_t index) const {
        SeededStream child(*this);
        child.path_.push_back(index);
        child.key_ = mix64(key_ ^ (kGolden * (index + 1)) ^ kDeriveSalt);
        child.counter_ = 0;
        return child;
    }

    std::uint64_t next_u64() {
        return mix64(key_ + kGolden * ++counter_);
    }

    /// Uniform double on the open interval (0, 1).
    double next_unit_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform double on (lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit_open();
    }

    bool bernoulli(double p) { return next_unit_open() < p; }

    std::uint64_t root_seed() const { return root_seed_; }
    const std::vector<std::uint64_t>& path() const { return path_; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kRootSalt = 0x8E1F0F58AD2C9B6DULL;
    static constexpr std::uint64_t kDeriveSalt = 0x632BE59BD9B4E019ULL;

    std::uint64_t root_seed_;
    std::vector<std::uint64_t> path_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

inline SeededStream derive_substream(const SeededStream& stream, std::uint64_t index) {
    return stream.substream(index);
}

} // namespace bellsim
