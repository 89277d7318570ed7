#pragma once

#include <cmath>
#include <cstdint>

namespace tdacp {

// Portable seeded generator: xoshiro256++ with splitmix64 seed expansion.
// All constants are the reference ones (Blackman & Vigna), so streams can be
// reproduced bit-for-bit in any language:
//   splitmix64: z = (s += 0x9E3779B97F4A7C15);
//               z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//               z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//               return z ^ (z >> 31);
//   xoshiro256++: result = rotl(s0 + s3, 23) + s0, then the linear update.
// uniform_double maps the top 53 bits to [0, 1); normals use the
// trigonometric Box-Muller transform (cos first, sin second).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); bound must be > 0. Floor of bound * U
    // keeps the draw reproducible from the uniform stream alone.
    std::uint64_t uniform_index(std::uint64_t bound) {
        auto idx = static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
        return idx < bound ? idx : bound - 1;
    }

    // Standard normal, Box-Muller (trig form). Draws two uniforms per pair of
    // normals and caches the sine branch.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi() * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr double pi() { return 3.14159265358979323846; }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t splitmix64(std::uint64_t& s) {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace tdacp
