#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "treelike/core_types.hpp"

namespace treelike {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the k-th output of stream (seed, stream_id) is a
/// pure function of (seed, stream_id, k). Work item i of a parallel job owns
/// stream i, so results do not depend on how items are split across workers.
class CounterRng {
public:
    CounterRng(Seed seed, std::uint64_t stream_id) noexcept
        : key_(mix64(seed.value ^ 0x6a09e667f3bcc909ULL) ^ mix64(stream_id + 0x9e3779b97f4a7c15ULL))
    {
    }

    std::uint64_t next() noexcept
    {
        return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    /// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with rejection.
    std::uint64_t uniform_below(std::uint64_t bound) noexcept
    {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Standard normal variate (Box-Muller; the paired value is cached).
    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace treelike
