#pragma once

// Linear RIS array model: phase codes, geometry, the power-domain array
// factor (PDAF), the autocorrelation of the unit-modulus sequence, the 3GPP
// element pattern, and incidence-angle retargeting.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ris/error.hpp"

namespace ris {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

using cplx = std::complex<double>;

/// Reduces an angle to its canonical representative in [0, 2*pi).
inline double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;  // fmod rounding at the top edge
    return r;
}

/// e^{j phi}. Phases that sit on a multiple of pi/2 (within a few ulps of
/// 2*pi) map to the exact phasors 1, j, -1, -j, so binary and quaternary
/// codes produce exactly real/imaginary correlations.
inline cplx unit_phasor(double phi) {
    const double quarters = phi / kHalfPi;
    const double k = std::nearbyint(quarters);
    if (std::abs(phi - k * kHalfPi) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phi))) {
        switch (((static_cast<long long>(k) % 4) + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return {std::cos(phi), std::sin(phi)};
}

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

/// Phase-shift configuration of an M-element RIS, stored canonically in [0, 2*pi).
class PhaseCode {
public:
    PhaseCode() = default;

    explicit PhaseCode(std::vector<double> phases) : phases_(std::move(phases)) {
        if (phases_.size() < 2) throw InvalidInput("phase code needs at least 2 elements, got " + std::to_string(phases_.size()));
        for (auto& p : phases_) {
            if (!std::isfinite(p)) throw InvalidInput("phase code contains a non-finite phase");
            p = wrap_phase(p);
        }
    }

    std::size_t size() const noexcept { return phases_.size(); }
    double operator[](std::size_t i) const { return phases_[i]; }
    std::span<const double> phases() const noexcept { return phases_; }

    /// The unit-modulus view psi_m = e^{j phi_m}.
    std::vector<cplx> phasors() const {
        std::vector<cplx> psi(phases_.size());
        std::transform(phases_.begin(), phases_.end(), psi.begin(), unit_phasor);
        return psi;
    }

    friend bool operator==(const PhaseCode&, const PhaseCode&) = default;

private:
    std::vector<double> phases_;
};

class ArrayGeometry {
public:
    ArrayGeometry(int m, double spacing_ratio = 0.5, double theta_h = 0.0)
        : m_(m), spacing_ratio_(spacing_ratio), theta_h_(theta_h) {
        if (m < 2) throw InvalidInput("element count must be >= 2, got " + std::to_string(m));
        if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio))
            throw InvalidInput("spacing ratio must be positive and finite");
        if (!(theta_h >= -kHalfPi && theta_h <= kHalfPi))
            throw InvalidInput("incidence angle theta_h must lie in [-pi/2, pi/2]");
    }

    int m() const noexcept { return m_; }
    double spacing_ratio() const noexcept { return spacing_ratio_; }
    double theta_h() const noexcept { return theta_h_; }

    ArrayGeometry with_theta_h(double theta_h) const { return {m_, spacing_ratio_, theta_h}; }

    /// Electrical phase step 2*pi*(Delta/lambda)*(sin theta_h + sin theta).
    double alpha(double theta) const { return kTwoPi * spacing_ratio_ * (std::sin(theta_h_) + std::sin(theta)); }

    friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

private:
    int m_;
    double spacing_ratio_;
    double theta_h_;
};

/// D+1 equally spaced angles -pi/2 + pi*i/D, i = 0..D.
class AngularGrid {
public:
    explicit AngularGrid(int d) : d_(d) {
        if (d < 1) throw InvalidInput("grid resolution D must be >= 1");
        points_.resize(static_cast<std::size_t>(d) + 1);
        for (int i = 0; i <= d; ++i) points_[static_cast<std::size_t>(i)] = -kHalfPi + kPi * i / d;
        points_.back() = kHalfPi;
    }

    int d() const noexcept { return d_; }
    std::size_t size() const noexcept { return points_.size(); }
    std::span<const double> points() const noexcept { return points_; }
    double operator[](std::size_t i) const { return points_[i]; }

private:
    int d_;
    std::vector<double> points_;
};

/// 3GPP single-element pattern G0(theta) = peak - min(12((theta - theta0)/dtheta)^2, floor) dBi.
struct ElementPattern {
    double peak_gain_dbi = 8.0;
    double theta0 = 0.0;
    double delta_theta = kHalfPi;
    double floor_db = 30.0;

    double gain_dbi(double theta) const {
        const double x = (theta - theta0) / delta_theta;
        return peak_gain_dbi - std::min(12.0 * x * x, floor_db);
    }
    double gain_linear(double theta) const { return from_db(gain_dbi(theta)); }
};

inline double element_gain(const ElementPattern& pattern, double theta) { return pattern.gain_dbi(theta); }

/// Autocorrelation R[tau] = sum_m psi_m conj(psi_{m+tau}), tau = -(M-1)..M-1.
struct AcfSequence {
    std::vector<cplx> values;  // index tau + (M-1)

    int max_lag() const noexcept { return static_cast<int>(values.size() / 2); }
    cplx at(int tau) const { return values.at(static_cast<std::size_t>(tau + max_lag())); }
};

namespace detail {

inline void check_angle(double theta) {
    if (!(theta >= -kHalfPi && theta <= kHalfPi))
        throw InvalidInput("angle " + std::to_string(theta) + " rad lies outside [-pi/2, pi/2]");
}

inline void check_dims(std::size_t code_size, const ArrayGeometry& geom) {
    if (code_size != static_cast<std::size_t>(geom.m()))
        throw InvalidInput("code length " + std::to_string(code_size) + " does not match geometry M = " +
                           std::to_string(geom.m()));
}

// Steering weights e^{-j(m-1)alpha}, m = 1..M, for one departure angle.
inline void fill_steering(const ArrayGeometry& geom, double theta, std::span<double> re, std::span<double> im) {
    const double a = geom.alpha(theta);
    for (std::size_t m = 0; m < re.size(); ++m) {
        const cplx w = unit_phasor(-static_cast<double>(m) * a);
        re[m] = w.real();
        im[m] = w.imag();
    }
}

// |sum psi_m w_m|^2. Every PDAF value in the library goes through this kernel.
inline double steered_power(std::span<const double> psi_re, std::span<const double> psi_im,
                            const double* w_re, const double* w_im) {
    double acc_re = 0.0;
    double acc_im = 0.0;
    const std::size_t n = psi_re.size();
    for (std::size_t m = 0; m < n; ++m) {
        acc_re += psi_re[m] * w_re[m] - psi_im[m] * w_im[m];
        acc_im += psi_re[m] * w_im[m] + psi_im[m] * w_re[m];
    }
    return acc_re * acc_re + acc_im * acc_im;
}

inline void split_phasors(std::span<const double> phases, std::span<double> re, std::span<double> im) {
    for (std::size_t m = 0; m < phases.size(); ++m) {
        const cplx p = unit_phasor(phases[m]);
        re[m] = p.real();
        im[m] = p.imag();
    }
}

}  // namespace detail

/// PDAF A(Phi, theta) = |sum_m e^{j phi_m} e^{-j 2 pi (Delta/lambda)(m-1)(sin theta_h + sin theta)}|^2.
inline double pdaf(const PhaseCode& code, const ArrayGeometry& geom, double theta) {
    detail::check_dims(code.size(), geom);
    detail::check_angle(theta);
    const std::size_t m = code.size();
    std::vector<double> buf(4 * m);
    std::span<double> pr(buf.data(), m), pi(buf.data() + m, m), wr(buf.data() + 2 * m, m), wi(buf.data() + 3 * m, m);
    detail::split_phasors(code.phases(), pr, pi);
    detail::fill_steering(geom, theta, wr, wi);
    return detail::steered_power(pr, pi, wr.data(), wi.data());
}

/// Precomputed steering weights for one (geometry, grid) pair.
///
/// Evaluating a code against the whole grid costs (D+1)*M complex
/// multiply-adds and no transcendental calls beyond the M phasors. Values are
/// bit-identical to pointwise pdaf() since both share the same weights and kernel.
class GridEvaluator {
public:
    GridEvaluator(const ArrayGeometry& geom, std::span<const double> angles)
        : m_(static_cast<std::size_t>(geom.m())), angles_(angles.begin(), angles.end()) {
        for (double t : angles_) detail::check_angle(t);
        w_re_.resize(angles_.size() * m_);
        w_im_.resize(angles_.size() * m_);
        for (std::size_t i = 0; i < angles_.size(); ++i)
            detail::fill_steering(geom, angles_[i], std::span(w_re_).subspan(i * m_, m_),
                                  std::span(w_im_).subspan(i * m_, m_));
    }

    GridEvaluator(const ArrayGeometry& geom, const AngularGrid& grid) : GridEvaluator(geom, grid.points()) {}

    std::size_t m() const noexcept { return m_; }
    std::span<const double> angles() const noexcept { return angles_; }

    /// PDAF at every angle, written into out (size = number of angles).
    void profile(std::span<const double> phases, std::span<double> out) const {
        check(phases.size());
        std::vector<double> buf(2 * m_);
        std::span<double> pr(buf.data(), m_), pi(buf.data() + m_, m_);
        detail::split_phasors(phases, pr, pi);
        for (std::size_t i = 0; i < angles_.size(); ++i)
            out[i] = detail::steered_power(pr, pi, &w_re_[i * m_], &w_im_[i * m_]);
    }

    std::vector<double> profile(std::span<const double> phases) const {
        std::vector<double> out(angles_.size());
        profile(phases, out);
        return out;
    }

    /// Minimum PDAF over the angles; same arithmetic as profile().
    double min_value(std::span<const double> phases) const {
        check(phases.size());
        std::vector<double> buf(2 * m_);
        std::span<double> pr(buf.data(), m_), pi(buf.data() + m_, m_);
        detail::split_phasors(phases, pr, pi);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < angles_.size(); ++i)
            best = std::min(best, detail::steered_power(pr, pi, &w_re_[i * m_], &w_im_[i * m_]));
        return best;
    }

private:
    void check(std::size_t n) const {
        if (n != m_)
            throw InvalidInput("code length " + std::to_string(n) + " does not match geometry M = " + std::to_string(m_));
    }

    std::size_t m_;
    std::vector<double> angles_;
    std::vector<double> w_re_;
    std::vector<double> w_im_;
};

struct ProfilePoint {
    double theta;
    double gain;
};

inline std::vector<ProfilePoint> pdaf_profile(const PhaseCode& code, const ArrayGeometry& geom, const AngularGrid& grid) {
    detail::check_dims(code.size(), geom);
    const GridEvaluator eval(geom, grid);
    const auto values = eval.profile(code.phases());
    std::vector<ProfilePoint> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = {grid[i], values[i]};
    return out;
}

inline AcfSequence acf(const PhaseCode& code) {
    const auto psi = code.phasors();
    const int m = static_cast<int>(psi.size());
    AcfSequence out;
    out.values.assign(static_cast<std::size_t>(2 * m - 1), cplx{});
    for (int tau = 1; tau < m; ++tau) {
        cplx sum{};
        for (int k = 0; k + tau < m; ++k) sum += psi[static_cast<std::size_t>(k)] * std::conj(psi[static_cast<std::size_t>(k + tau)]);
        out.values[static_cast<std::size_t>(m - 1 + tau)] = sum;
        out.values[static_cast<std::size_t>(m - 1 - tau)] = std::conj(sum);
    }
    // |psi_m| = 1 for every element, so the zero-lag term is M analytically.
    out.values[static_cast<std::size_t>(m - 1)] = cplx(static_cast<double>(m), 0.0);
    return out;
}

/// Re-points a code to a new incidence angle without re-optimizing:
/// phi_m + 2 pi (Delta/lambda)(m-1)(sin new_theta_h - sin theta_h) mod 2 pi.
/// For a code designed at theta_h = 0 this is the usual phi_m + 2 pi (Delta/lambda)(m-1) sin theta_h.
inline PhaseCode retarget(const PhaseCode& code, const ArrayGeometry& geom, double new_theta_h) {
    detail::check_dims(code.size(), geom);
    detail::check_angle(new_theta_h);
    if (new_theta_h == geom.theta_h()) return code;
    const double step = kTwoPi * geom.spacing_ratio() * (std::sin(new_theta_h) - std::sin(geom.theta_h()));
    std::vector<double> out(code.size());
    for (std::size_t m = 0; m < code.size(); ++m) out[m] = code[m] + static_cast<double>(m) * step;
    return PhaseCode(std::move(out));
}

}  // namespace ris
