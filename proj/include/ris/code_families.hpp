#pragma once

// Phase-code generators: Barker, Frank, Chu, best-of-random, the closed-form
// max-average code, and the published CGA-optimized codes.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ris/array_model.hpp"
#include "ris/error.hpp"
#include "ris/rng.hpp"

namespace ris {

namespace detail {

// pi * num / den, with num already reduced modulo 2*den.
inline double pi_fraction(long long num, long long den) { return kPi * static_cast<double>(num) / static_cast<double>(den); }

struct BarkerEntry {
    int m;
    const char* primary;    // '+' -> 0, '-' -> pi
    const char* alternate;  // nullptr when only one code exists
};

inline constexpr std::array<BarkerEntry, 7> kBarker{{
    {2, "+-", "++"},
    {3, "++-", nullptr},
    {4, "++-+", "+++-"},
    {5, "+++-+", nullptr},
    {7, "+++--+-", nullptr},
    {11, "+++---+--+-", nullptr},
    {13, "+++++--++-+-+", nullptr},
}};

inline const BarkerEntry& barker_entry(int m) {
    for (const auto& e : kBarker)
        if (e.m == m) return e;
    throw InvalidInput("Barker codes exist only for M in {2, 3, 4, 5, 7, 11, 13}, got M = " + std::to_string(m));
}

}  // namespace detail

inline constexpr std::array<int, 7> kBarkerLengths{2, 3, 4, 5, 7, 11, 13};

/// Barker code of length m with phases in {0, pi}. For m = 2 and m = 4 two
/// codes are known; `alternate` selects the second one.
inline PhaseCode barker(int m, bool alternate = false) {
    const auto& e = detail::barker_entry(m);
    const char* pattern = e.primary;
    if (alternate) {
        if (e.alternate == nullptr) throw InvalidInput("Barker length " + std::to_string(m) + " has no alternate code");
        pattern = e.alternate;
    }
    std::vector<double> phases(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) phases[static_cast<std::size_t>(i)] = pattern[i] == '-' ? kPi : 0.0;
    return PhaseCode(std::move(phases));
}

/// Peak sidelobe ratio 20 log10(1/M) in dB.
inline double barker_sidelobe_ratio_db(int m) {
    detail::barker_entry(m);
    return 20.0 * std::log10(1.0 / m);
}

/// Frank code of length M = N^2: rows of Omega[i][j] = 2 pi i j / N, concatenated.
inline PhaseCode frank(int m) {
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    if (m < 4 || n * n != m) throw InvalidInput("Frank requires perfect-square M >= 4, got M = " + std::to_string(m));
    std::vector<double> phases;
    phases.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) phases.push_back(detail::pi_fraction(2LL * ((static_cast<long long>(i) * j) % n), n));
    return PhaseCode(std::move(phases));
}

/// Chu code: q pi (m-1)^2 / M for even M, q pi m (m-1) / M for odd M (m = 1..M), mod 2 pi.
inline PhaseCode chu(int m, int q) {
    if (m < 2) throw InvalidInput("Chu requires M >= 2");
    if (q < 1) throw InvalidInput("Chu requires q >= 1, got q = " + std::to_string(q));
    if (std::gcd(q, m) != 1)
        throw InvalidInput("Chu requires gcd(q, M) = 1, got gcd(" + std::to_string(q) + ", " + std::to_string(m) +
                           ") = " + std::to_string(std::gcd(q, m)));
    const long long mod = 2LL * m;
    std::vector<double> phases(static_cast<std::size_t>(m));
    for (long long idx = 1; idx <= m; ++idx) {
        const long long base = (m % 2 == 0) ? (idx - 1) * (idx - 1) : idx * (idx - 1);
        const long long num = ((base % mod) * (q % mod)) % mod;
        phases[static_cast<std::size_t>(idx - 1)] = detail::pi_fraction(num, m);
    }
    return PhaseCode(std::move(phases));
}

struct ChuChoice {
    int q;
    PhaseCode code;
    double fitness;  // grid-min PDAF, linear
};

/// Searches q in 1..M-1 coprime to M for the largest grid-min PDAF.
/// Values within a relative 1e-9 of each other count as ties and the smallest q wins
/// (for odd M, q and M - q give mirrored sequences whose minima differ only by round-off).
inline ChuChoice chu_best_q(int m, const ArrayGeometry& geom, const AngularGrid& grid) {
    detail::check_dims(static_cast<std::size_t>(m), geom);
    const GridEvaluator eval(geom, grid);
    std::optional<ChuChoice> best;
    for (int q = 1; q < m; ++q) {
        if (std::gcd(q, m) != 1) continue;
        PhaseCode c = chu(m, q);
        const double f = eval.min_value(c.phases());
        if (!best || f > best->fitness * (1.0 + 1e-9) + 1e-300) best = ChuChoice{q, std::move(c), f};
    }
    if (!best) throw InvalidInput("no q coprime to M in 1..M-1");
    return std::move(*best);
}

/// Uniform i.i.d. phases on [0, 2 pi); trial t draws from Stream(seed, t).
inline PhaseCode random_code(int m, std::uint64_t seed, std::uint64_t trial) {
    Stream rng(seed, trial);
    std::vector<double> phases(static_cast<std::size_t>(m));
    for (auto& p : phases) p = kTwoPi * rng.uniform();
    return PhaseCode(std::move(phases));
}

/// Best of `trials` random codes by grid-min PDAF (first maximum wins).
inline PhaseCode random_best(int m, int trials, std::uint64_t seed, const ArrayGeometry& geom, const AngularGrid& grid) {
    if (trials < 1) throw InvalidInput("random_best needs at least one trial");
    detail::check_dims(static_cast<std::size_t>(m), geom);
    const GridEvaluator eval(geom, grid);
    PhaseCode best = random_code(m, seed, 0);
    double best_f = eval.min_value(best.phases());
    for (int t = 1; t < trials; ++t) {
        PhaseCode c = random_code(m, seed, static_cast<std::uint64_t>(t));
        const double f = eval.min_value(c.phases());
        if (f > best_f) {
            best_f = f;
            best = std::move(c);
        }
    }
    return best;
}

/// Closed-form maximizer of the angular-average PDAF at half-wavelength spacing:
/// phi_m = phi0 + (m-1)(1 + sin theta_h) pi mod 2 pi.
inline PhaseCode max_average(int m, const ArrayGeometry& geom, double phi0 = 0.0) {
    if (m < 2) throw InvalidInput("max-average code needs M >= 2");
    const double half_turns_per_step = 1.0 + std::sin(geom.theta_h());
    std::vector<double> phases(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        // reduce the half-turn count modulo 2 before scaling by pi, so theta_h = 0 gives exactly 0/pi
        const double half_turns = std::fmod(static_cast<double>(i) * half_turns_per_step, 2.0);
        phases[static_cast<std::size_t>(i)] = phi0 + half_turns * kPi;
    }
    return PhaseCode(std::move(phases));
}

namespace detail {

inline constexpr std::array<double, 13> kProposed13{0.9255, 4.6334, 2.0632, 5.6294, 3.0091, 3.3760, 0.8825,
                                                     1.4025, 5.3366, 5.9881, 0.4434, 1.0334, 1.6318};
inline constexpr std::array<double, 16> kProposed16{5.1194, 5.9698, 0.6334, 2.6752, 4.1800, 3.1756, 2.7309, 3.9677,
                                                     1.5603, 3.9362, 0.7873, 4.6435, 3.6637, 2.1817, 6.1171, 4.3546};
inline constexpr std::array<double, 36> kProposed36{
    2.5458, 5.8091, 4.8406, 6.1005, 0.6850, 3.9223, 3.3962, 4.3150, 1.2969, 0.4361, 2.3980, 1.1877,
    0.0314, 4.5914, 3.0137, 4.7279, 0.1981, 6.1708, 0.8647, 4.1516, 2.2116, 1.7623, 2.7874, 2.9865,
    4.2146, 2.0956, 3.4289, 1.6303, 3.8954, 1.7463, 3.3191, 4.9514, 1.6416, 3.8338, 6.1454, 2.1315};
inline constexpr std::array<double, 64> kProposed64{
    6.2154, 0.9377, 5.9622, 2.3982, 2.0550, 5.2374, 4.6543, 6.1568, 2.0360, 3.3983, 3.2310, 4.6648, 5.7030,
    0.2454, 1.3573, 5.7993, 4.0525, 1.7875, 2.6875, 4.6555, 4.1909, 3.3503, 4.3216, 3.1219, 4.1523, 1.4800,
    3.9280, 1.8255, 2.5134, 4.4152, 1.4448, 2.7278, 6.0119, 5.6658, 3.4961, 3.4214, 1.3725, 3.1275, 0.9327,
    3.4367, 4.3562, 5.5590, 3.9093, 3.5500, 4.7366, 3.0102, 0.2376, 4.6770, 5.2783, 2.3078, 0.3114, 4.7210,
    0.4638, 5.7200, 4.5785, 1.8969, 5.5300, 1.3563, 5.1408, 4.0969, 1.8617, 0.9126, 5.7912, 4.1614};

}  // namespace detail

inline constexpr std::array<int, 4> kProposedLengths{13, 16, 36, 64};

/// Published CGA-optimized codes (theta_h = 0, Delta/lambda = 1/2), 4-decimal radians.
inline PhaseCode table_proposed(int m) {
    auto make = [](std::span<const double> v) { return PhaseCode(std::vector<double>(v.begin(), v.end())); };
    switch (m) {
        case 13: return make(detail::kProposed13);
        case 16: return make(detail::kProposed16);
        case 36: return make(detail::kProposed36);
        case 64: return make(detail::kProposed64);
        default:
            throw InvalidInput("published optimized codes exist only for M in {13, 16, 36, 64}, got M = " + std::to_string(m));
    }
}

}  // namespace ris
