#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace rcm {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based keyed hash: the draw for (key0, key1, key2, counter) is a
/// pure function of its arguments, so results do not depend on evaluation
/// order or thread count.
constexpr std::uint64_t counter_hash(std::uint64_t k0, std::uint64_t k1,
                                     std::uint64_t k2, std::uint64_t ctr) {
    std::uint64_t h = mix64(k0);
    h = mix64(h ^ k1);
    h = mix64(h ^ k2);
    h = mix64(h ^ ctr);
    return h;
}

constexpr double u64_to_unit(std::uint64_t h) {
    return double(h >> 11) * 0x1.0p-53;  // [0, 1)
}

/// One independent substream of the counter RNG, identified by up to three
/// 64-bit key words.
class RngStream {
public:
    RngStream(std::uint64_t k0, std::uint64_t k1 = 0, std::uint64_t k2 = 0)
        : k0_(k0), k1_(k1), k2_(k2) {}

    std::uint64_t next_u64() { return counter_hash(k0_, k1_, k2_, ctr_++); }
    double next_unit() { return u64_to_unit(next_u64()); }

    /// Exponential with the given rate via inverse CDF.
    double next_exponential(double rate) {
        return -std::log1p(-next_unit()) / rate;
    }

    /// Index into the discrete distribution proportional to weights.
    int next_choice(std::span<const double> weights, double total) {
        double target = next_unit() * total;
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            cum += weights[i];
            if (target < cum) return int(i);
        }
        return int(weights.size()) - 1;
    }

private:
    std::uint64_t k0_, k1_, k2_;
    std::uint64_t ctr_ = 0;
};

}  // namespace rcm
