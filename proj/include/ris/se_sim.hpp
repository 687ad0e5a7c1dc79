#pragma once

// Monte-Carlo spectral-efficiency simulation of a RIS-assisted downlink and
// the probabilistic lower/upper bounds on the UE-average SE.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ris/array_model.hpp"
#include "ris/error.hpp"
#include "ris/metrics.hpp"
#include "ris/rng.hpp"

namespace ris {

struct SimScenario {
    double tx_power_dbm = 47.0;
    double noise_power_dbm = -90.0;
    double r_h_m = 50.0;
    double r_min_m = 50.0;
    double r_max_m = 100.0;
    double theta_min = -kPi / 3.0;
    double theta_max = kPi / 3.0;
    int ue_count = 10000;
    ElementPattern pattern{};
    double path_loss_intercept_db = -37.5;
    double path_loss_exponent_coeff = 22.0;
    std::uint64_t seed = 1;

    /// UE angles on +-pi/3, as in the reference link-level simulation.
    static SimScenario paper_sim() { return {}; }

    /// UE angles on the full half ring +-pi/2, the setting the SE bounds assume.
    static SimScenario prop1() {
        SimScenario s;
        s.theta_min = -kHalfPi;
        s.theta_max = kHalfPi;
        return s;
    }

    void validate() const {
        if (!(r_min_m > 0.0)) throw InvalidInput("r_min must be positive");
        if (!(r_min_m <= r_max_m)) throw InvalidInput("r_min must not exceed r_max");
        if (!(r_h_m > 0.0)) throw InvalidInput("r_h must be positive");
        if (!(theta_min < theta_max)) throw InvalidInput("theta_min must be below theta_max");
        if (theta_min < -kHalfPi || theta_max > kHalfPi) throw InvalidInput("UE angles must lie within [-pi/2, pi/2]");
        if (ue_count < 2) throw InvalidInput("ue_count must be >= 2");
        for (double v : {tx_power_dbm, noise_power_dbm, path_loss_intercept_db, path_loss_exponent_coeff})
            if (!std::isfinite(v)) throw InvalidInput("scenario contains a non-finite value");
    }

    /// beta(r) = intercept - coeff * log10(r), dB.
    double path_loss_db(double r) const { return path_loss_intercept_db - path_loss_exponent_coeff * std::log10(r); }
    double path_loss_linear(double r) const { return from_db(path_loss_db(r)); }

    friend bool operator==(const SimScenario& a, const SimScenario& b) {
        auto tie = [](const SimScenario& s) {
            return std::tie(s.tx_power_dbm, s.noise_power_dbm, s.r_h_m, s.r_min_m, s.r_max_m, s.theta_min, s.theta_max,
                            s.ue_count, s.pattern.peak_gain_dbi, s.pattern.theta0, s.pattern.delta_theta,
                            s.pattern.floor_db, s.path_loss_intercept_db, s.path_loss_exponent_coeff, s.seed);
        };
        return tie(a) == tie(b);
    }
};

/// v = (P / sigma^2) beta_h(r_h) G0(theta_h), linear.
inline double link_constant_v(const SimScenario& s, const ArrayGeometry& geom) {
    return from_db(s.tx_power_dbm - s.noise_power_dbm + s.path_loss_db(s.r_h_m) + s.pattern.gain_dbi(geom.theta_h()));
}

/// S = log2(1 + v beta_g(r) G0(theta) A) for a known PDAF value.
inline double se_from_pdaf(double v, const SimScenario& s, double r, double theta, double a) {
    return std::log2(1.0 + v * s.path_loss_linear(r) * s.pattern.gain_linear(theta) * a);
}

inline double se_of_ue(const PhaseCode& code, const ArrayGeometry& geom, const SimScenario& s, double r, double theta) {
    return se_from_pdaf(link_constant_v(s, geom), s, r, theta, pdaf(code, geom, theta));
}

struct UeSample {
    double r;
    double theta;
};

/// UE k is drawn from Stream(seed, k): r ~ U[r_min, r_max] then theta ~ U[theta_min, theta_max].
inline std::vector<UeSample> draw_ues(const SimScenario& s) {
    std::vector<UeSample> out(static_cast<std::size_t>(s.ue_count));
    for (std::size_t k = 0; k < out.size(); ++k) {
        Stream rng(s.seed, k);
        out[k].r = rng.uniform(s.r_min_m, s.r_max_m);
        out[k].theta = rng.uniform(s.theta_min, s.theta_max);
    }
    return out;
}

struct EcdfPoint {
    double se;
    double cdf;
};

struct SeReport {
    double s_min = 0.0;
    double s_mean = 0.0;
    double std_error = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::vector<EcdfPoint> ecdf;
    int sample_count = 0;
    SimScenario scenario;
};

/// SE statistics over an explicit set of UE positions.
inline SeReport run_mcmc_on(const PhaseCode& code, const ArrayGeometry& geom, const SimScenario& s,
                            std::span<const UeSample> ues) {
    detail::check_dims(code.size(), geom);
    if (ues.size() < 2) throw InvalidInput("need at least 2 UE samples");
    std::vector<double> angles(ues.size());
    for (std::size_t k = 0; k < ues.size(); ++k) angles[k] = ues[k].theta;

    const double v = link_constant_v(s, geom);
    std::vector<double> se(ues.size());
    // chunked so the steering table stays small
    constexpr std::size_t kChunk = 4096;
    for (std::size_t start = 0; start < ues.size(); start += kChunk) {
        const std::size_t n = std::min(kChunk, ues.size() - start);
        const GridEvaluator eval(geom, std::span(angles).subspan(start, n));
        const auto a = eval.profile(code.phases());
        for (std::size_t i = 0; i < n; ++i)
            se[start + i] = se_from_pdaf(v, s, ues[start + i].r, ues[start + i].theta, a[i]);
    }

    SeReport rep;
    rep.scenario = s;
    rep.sample_count = static_cast<int>(se.size());
    const double k = static_cast<double>(se.size());
    double sum = 0.0;
    for (double x : se) sum += x;
    rep.s_mean = sum / k;
    double ss = 0.0;
    for (double x : se) ss += (x - rep.s_mean) * (x - rep.s_mean);
    rep.std_error = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    rep.ci95_low = rep.s_mean - 1.96 * rep.std_error;
    rep.ci95_high = rep.s_mean + 1.96 * rep.std_error;

    std::sort(se.begin(), se.end());
    rep.s_min = se.front();
    rep.ecdf.resize(se.size());
    for (std::size_t i = 0; i < se.size(); ++i) rep.ecdf[i] = {se[i], static_cast<double>(i + 1) / k};
    return rep;
}

inline SeReport run_mcmc(const PhaseCode& code, const ArrayGeometry& geom, const SimScenario& s) {
    s.validate();
    const auto ues = draw_ues(s);
    return run_mcmc_on(code, geom, s, ues);
}

struct SeBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::string epsilon_note;
};

/// Nodes of the composite midpoint rule used for E_r{.} over U[r_min, r_max].
inline constexpr int kRadialQuadratureNodes = 10000;

namespace detail {

template <typename F>
double radial_mean(const SimScenario& s, F&& f) {
    if (s.r_min_m == s.r_max_m) return f(s.r_min_m);
    const double h = (s.r_max_m - s.r_min_m) / kRadialQuadratureNodes;
    double sum = 0.0;
    for (int i = 0; i < kRadialQuadratureNodes; ++i) sum += f(s.r_min_m + (i + 0.5) * h);
    return sum / kRadialQuadratureNodes;
}

// Extremes of the element pattern over [-pi/2, pi/2].
inline std::pair<double, double> pattern_extremes_linear(const ElementPattern& p) {
    const double peak_at = std::clamp(p.theta0, -kHalfPi, kHalfPi);
    const double g_max = p.gain_linear(peak_at);
    const double g_min = std::min(p.gain_linear(-kHalfPi), p.gain_linear(kHalfPi));
    return {g_min, g_max};
}

}  // namespace detail

/// Bounds on the UE-average SE for UEs uniform on the half ring
/// r ~ U[r_min, r_max], theta ~ U[-pi/2, pi/2]:
///   lower = E_r{log2(1 + v G0min Amin beta_g(r))}
///   upper = log2(1 + v G0max E_r{beta_g(r)} E_theta{A})
/// Amin is the grid minimum, E_theta{A} the closed form. The scenario's own
/// angle range is ignored; the bounds describe the half-ring distribution.
inline SeBounds prop1_bounds(const PhaseCode& code, const ArrayGeometry& geom, const SimScenario& s,
                             const AngularGrid& grid) {
    s.validate();
    detail::check_dims(code.size(), geom);
    const double v = link_constant_v(s, geom);
    const auto [g_min, g_max] = detail::pattern_extremes_linear(s.pattern);
    const double a_min = grid_min_pdaf(code, geom, grid);
    const double a_avg = avg_pdaf_closed_form(code, geom);

    SeBounds b;
    b.lower = detail::radial_mean(s, [&](double r) { return std::log2(1.0 + v * g_min * a_min * s.path_loss_linear(r)); });
    const double beta_avg = detail::radial_mean(s, [&](double r) { return s.path_loss_linear(r); });
    b.upper = std::log2(1.0 + v * g_max * beta_avg * a_avg);
    b.epsilon_note =
        "bounds hold up to an arbitrarily small epsilon once the UE count is large enough; "
        "finite-K sample means may sit slightly outside (about 0.05 bps/Hz at K = 10^4)";
    return b;
}

}  // namespace ris
