#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nadc {

// Seeded random stream with hand-rolled draw routines. std::mt19937_64 is
// specified bit-exactly by the standard, but the <random> distributions are
// not, so the distributions live here to keep traces reproducible across
// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : gen_(mix(seed, stream)) {}

    std::uint64_t next() { return gen_(); }

    // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
    int uniform_int(int lo, int hi)
    {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return lo + static_cast<int>(x % span);
    }

    // Uniform double in (0, 1].
    double uniform01()
    {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Box-Muller, cosine branch only so every draw consumes exactly two
    // uniforms and the stream position stays predictable.
    double gaussian(double mean, double sigma)
    {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * 3.141592653589793238462643 * u2);
        return mean + sigma * z;
    }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream)
    {
        // splitmix64 finalizer over (seed, stream) so distinct streams from
        // the same seed do not overlap trivially
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
};

} // namespace nadc
