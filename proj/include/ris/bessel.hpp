#pragma once

#include <cmath>
#include <numbers>

#include "ris/error.hpp"

namespace ris {

namespace detail {

// sum_k (-x^2/4)^k / (k!)^2; cancellation is harmless for |x| <= 4.
inline double j0_series(double x) {
    const long double q = -0.25L * static_cast<long double>(x) * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return static_cast<double>(sum);
}

// Miller backward recurrence J_{n-1} = (2n/x) J_n - J_{n+1}, normalized by
// J_0 + 2 (J_2 + J_4 + ...) = 1. Stable for any x > 0; used on the middle range.
inline double j0_miller(double x) {
    const long double lx = x;
    int start = 2 * (static_cast<int>(x) / 2) + 52;
    long double jp1 = 0.0L;  // J_{n+1}
    long double jn = 1e-30L;  // J_n, arbitrary scale
    long double even_sum = 0.0L;
    for (int n = start; n > 0; --n) {
        const long double jm1 = (2.0L * n / lx) * jn - jp1;
        jp1 = jn;
        jn = jm1;
        if ((n - 1) % 2 == 0 && n - 1 > 0) even_sum += jn;
        if (std::fabs(jn) > 1e200L) {
            jn *= 1e-200L;
            jp1 *= 1e-200L;
            even_sum *= 1e-200L;
        }
    }
    return static_cast<double>(jn / (jn + 2.0L * even_sum));
}

// Hankel asymptotic expansion, summed up to the smallest term.
inline double j0_asymptotic(double x) {
    const double inv8x = 1.0 / (8.0 * x);
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -odd * odd * inv8x / k;  // a_k(0) / x^k
        if (std::fabs(term) > prev) break;
        prev = std::fabs(term);
        // P takes even k with sign (-1)^{k/2}, Q odd k with sign (-1)^{(k-1)/2}.
        if (k % 2 == 0)
            p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
        else
            q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * term;
        if (prev < 1e-18) break;
    }
    // cos(x - pi/4) and sin(x - pi/4) without forming x - pi/4.
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double cos_chi = (c + s) * std::numbers::sqrt2 * 0.5;
    const double sin_chi = (s - c) * std::numbers::sqrt2 * 0.5;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace detail

/// Bessel function of the first kind, order zero:
/// J0(x) = (1/pi) * integral_{-pi/2}^{pi/2} e^{j x sin t} dt.
inline double bessel_j0(double x) {
    if (!std::isfinite(x)) throw InvalidInput("bessel_j0: argument must be finite");
    const double ax = std::fabs(x);
    if (ax <= 4.0) return detail::j0_series(ax);
    if (ax < 25.0) return detail::j0_miller(ax);
    return detail::j0_asymptotic(ax);
}

}  // namespace ris
