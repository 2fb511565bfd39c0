#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace v2vlos {

struct RngSeed {
    std::uint64_t value = 0;

    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for item `index` of a batch: mix(seed ^ mix(index + golden gamma)).
constexpr RngSeed sub_seed(RngSeed seed, std::uint64_t index) noexcept
{
    return RngSeed{splitmix64_mix(seed.value ^ splitmix64_mix(index + 0x9e3779b97f4a7c15ULL))};
}

/// xoshiro256** 1.0 (Blackman, Vigna). State is filled from the seed with a
/// SplitMix64 stream, so every 64-bit seed is valid. Output is identical on
/// every platform, unlike the std:: distributions.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(RngSeed seed) noexcept
    {
        std::uint64_t x = seed.value;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            word = splitmix64_mix(x);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace v2vlos
