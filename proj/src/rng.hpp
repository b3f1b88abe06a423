#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace radar_ood {

// SplitMix64 finalizer. Used to derive independent sub-streams (per frame,
// per channel, per epoch) from one base seed so that work can be distributed
// across workers and still reproduce the serial result bit for bit.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_a, std::uint64_t stream_b = 0) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ splitmix64(stream_a + 0x9e3779b97f4a7c15ull));
    h = splitmix64(h ^ splitmix64(stream_b + 0x2545f4914f6cdd1dull));
    return h;
}

// Uniform double in [0,1) from the top 53 bits. mt19937_64 output is fully
// specified by the standard, and this mapping avoids the
// implementation-defined std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& eng) {
    return double(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

// Box-Muller standard normal on top of uniform01; deterministic everywhere,
// unlike std::normal_distribution.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 1.0 - uniform01(eng_); // (0,1], keeps log() finite
        double u2 = uniform01(eng_);
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace radar_ood
