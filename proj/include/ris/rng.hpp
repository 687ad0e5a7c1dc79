#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ris {

// Counter-based random streams.
//
// Every stream is identified by (seed, stream id). Draw i of a stream is the
// SplitMix64 finalizer applied to key + (i + 1) * golden, where the key is
// itself mixed from (seed, stream). The output is a pure function of
// (seed, stream, i), so streams can be handed to independent workers and
// results never depend on evaluation order or platform.

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Derives a child seed from a parent seed and a list of indices.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) noexcept {
    return splitmix64_mix(splitmix64_mix(seed + kGolden) ^ (a * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
}
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(seed, a), b);
}

class Stream {
public:
    using result_type = std::uint64_t;

    constexpr Stream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : key_(derive_seed(seed, stream_id)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return splitmix64_mix(key_ + counter_ * kGolden);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) noexcept {
        if (n <= 1) return 0;
        for (;;) {
            const std::uint64_t x = (*this)();
            const unsigned __int128 p = static_cast<unsigned __int128>(x) * n;
            const auto low = static_cast<std::uint64_t>(p);
            if (low >= n || low >= (-n) % n) return static_cast<std::uint64_t>(p >> 64);
        }
    }

    /// Standard normal via Box-Muller (one value per call, no cached spare).
    double normal() noexcept {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    constexpr std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ris
