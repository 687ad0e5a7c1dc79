#pragma once

// Beam-quality metrics: grid-min PDAF, the closed-form angular average of the
// PDAF, and the average normalized by its half-wavelength maximum.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "ris/array_model.hpp"
#include "ris/bessel.hpp"

namespace ris {

/// Grid minima below this linear value are serialized as kDbFloor.
inline constexpr double kLinearFloor = 1e-15;
inline constexpr double kDbFloor = -150.0;

namespace detail {

inline double lag_argument(double spacing_ratio, int k) { return kTwoPi * spacing_ratio * k; }

inline std::vector<double> j0_by_lag(double spacing_ratio, int m) {
    std::vector<double> j(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) j[static_cast<std::size_t>(k)] = bessel_j0(lag_argument(spacing_ratio, k));
    return j;
}

}  // namespace detail

/// E_theta{A(Phi, theta)} for theta ~ U[-pi/2, pi/2]:
/// M + 2 sum_{n<m} J0(a_{m-n}) cos(phi_m - phi_n - a_{m-n} sin theta_h), a_k = 2 pi (Delta/lambda) k.
inline double avg_pdaf_closed_form(const PhaseCode& code, const ArrayGeometry& geom) {
    detail::check_dims(code.size(), geom);
    const int m = geom.m();
    const auto j0 = detail::j0_by_lag(geom.spacing_ratio(), m);
    const double sh = std::sin(geom.theta_h());
    double sum = 0.0;
    for (int n = 0; n < m - 1; ++n) {
        for (int k = n + 1; k < m; ++k) {
            const int lag = k - n;
            const double a = detail::lag_argument(geom.spacing_ratio(), lag);
            sum += 2.0 * j0[static_cast<std::size_t>(lag)] * std::cos(code[static_cast<std::size_t>(k)] - code[static_cast<std::size_t>(n)] - a * sh);
        }
    }
    return static_cast<double>(m) + sum;
}

/// max over codes of E_theta{A} at Delta/lambda = 1/2:
/// M + 2 sum_{n<m} (-1)^{m-n} J0((m-n) pi). Summed in the same order as
/// avg_pdaf_closed_form so the max-average code normalizes to exactly 1.
inline double max_avg_pdaf_half_wavelength(int m) {
    const auto j0 = detail::j0_by_lag(0.5, m);
    double sum = 0.0;
    for (int n = 0; n < m - 1; ++n)
        for (int k = n + 1; k < m; ++k) {
            const int lag = k - n;
            sum += 2.0 * j0[static_cast<std::size_t>(lag)] * (lag % 2 == 0 ? 1.0 : -1.0);
        }
    return static_cast<double>(m) + sum;
}

/// Average PDAF normalized by its maximum over all codes; only defined for Delta/lambda = 1/2.
inline double u_half(const PhaseCode& code, const ArrayGeometry& geom) {
    if (geom.spacing_ratio() != 0.5)
        throw UnsupportedConfiguration("normalized average PDAF is only defined for spacing ratio 1/2");
    return avg_pdaf_closed_form(code, geom) / max_avg_pdaf_half_wavelength(geom.m());
}

/// Number of periodic-trapezoid nodes used by avg_pdaf_numeric. The integrand,
/// written in t with sin(theta) = sin(t) over a full period, is band limited
/// to roughly 2 pi (Delta/lambda)(M-1); four times that plus 256 leaves the
/// aliasing error far below double precision.
inline int avg_pdaf_quadrature_nodes(const ArrayGeometry& geom) {
    return 4 * static_cast<int>(std::ceil(kTwoPi * geom.spacing_ratio() * (geom.m() - 1))) + 256;
}

/// Numerical E_theta{A}: (1/2pi) * integral over one period of A evaluated at
/// sin(theta) = sin(t), by the trapezoid rule (spectrally accurate for periodic integrands).
inline double avg_pdaf_numeric(const PhaseCode& code, const ArrayGeometry& geom) {
    detail::check_dims(code.size(), geom);
    const int n = avg_pdaf_quadrature_nodes(geom);
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) angles[static_cast<std::size_t>(i)] = std::asin(std::sin(kTwoPi * i / n));
    const GridEvaluator eval(geom, angles);
    const auto values = eval.profile(code.phases());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / n;
}

inline double grid_min_pdaf(const PhaseCode& code, const ArrayGeometry& geom, const AngularGrid& grid) {
    detail::check_dims(code.size(), geom);
    return GridEvaluator(geom, grid).min_value(code.phases());
}

/// 10 log10 of the grid-min PDAF; -infinity when the minimum is exactly 0.
inline double a_min_db(const PhaseCode& code, const ArrayGeometry& geom, const AngularGrid& grid) {
    const double v = grid_min_pdaf(code, geom, grid);
    return v > 0.0 ? to_db(v) : -std::numeric_limits<double>::infinity();
}

struct MetricsReport {
    double a_min_linear = 0.0;
    double a_min_db = 0.0;        // floored at kDbFloor
    bool a_min_floored = false;   // true when a_min_linear < kLinearFloor
    double a_avg_linear = 0.0;    // closed form
    double a_avg_numeric = 0.0;   // quadrature check
    std::optional<double> u_half; // absent unless Delta/lambda = 1/2
    int grid_d = 0;
    int m = 0;
    double spacing_ratio = 0.0;
    double theta_h = 0.0;
};

inline MetricsReport metrics_report(const PhaseCode& code, const ArrayGeometry& geom, const AngularGrid& grid) {
    MetricsReport r;
    r.a_min_linear = grid_min_pdaf(code, geom, grid);
    r.a_min_floored = r.a_min_linear < kLinearFloor;
    r.a_min_db = r.a_min_floored ? kDbFloor : to_db(r.a_min_linear);
    r.a_avg_linear = avg_pdaf_closed_form(code, geom);
    r.a_avg_numeric = avg_pdaf_numeric(code, geom);
    if (geom.spacing_ratio() == 0.5) r.u_half = u_half(code, geom);
    r.grid_d = grid.d();
    r.m = geom.m();
    r.spacing_ratio = geom.spacing_ratio();
    r.theta_h = geom.theta_h();
    return r;
}

}  // namespace ris
