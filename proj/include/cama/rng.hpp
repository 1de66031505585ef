#pragma once

#include <cmath>
#include <cstdint>

namespace cama {

// splitmix64, chosen over std:: engines because its output sequence is
// fixed by the algorithm itself, so seeded golden values survive
// standard-library and platform changes.

inline constexpr std::uint64_t kSplitMix64Increment = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64_mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based access: the value at position `counter` (0-based) of the
// splitmix64 stream seeded with `seed`, without generating the prefix.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64_mix(seed + (counter + 1) * kSplitMix64Increment);
}

// Map 64 random bits to a double in [0, 1).
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Sequential splitmix64 generator with uniform and normal draws. One
// normal consumes exactly two stream positions, keeping generated
// cohorts reproducible position-for-position under a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform() { return unit_double(next_raw()); }

    // Box-Muller, single-output form.
    double normal() {
        const double u1 = (static_cast<double>(next_raw() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = unit_double(next_raw());
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t next_raw() {
        state_ += kSplitMix64Increment;
        return splitmix64_mix(state_);
    }

    std::uint64_t state_;
};

}  // namespace cama
