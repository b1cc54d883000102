#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "numerov/errors.hpp"

namespace numerov {

/// A propagation step failed (vanishing denominator in the three-point
/// formula). Carries the grid index so callers can report where.
class StepFailure : public Error {
public:
    explicit StepFailure(std::size_t grid_index)
        : Error("recurrence step failed at grid index " + std::to_string(grid_index) +
                ": vanishing denominator"),
          grid_index(grid_index) {}

    std::size_t grid_index;
};

/// Two known samples and the step for one three-point advance:
/// psi_prev = psi(x - delta), psi_cur = psi(x).
struct StepTriple {
    double psi_prev;
    double psi_cur;
    double delta;       // > 0
    std::size_t index = 0; // grid index of the point being produced, for diagnostics
};

/// k^2 sampled at the three stencil points of psi'' = -k^2(x) psi.
struct NormalFormCoeffs {
    double k2_prev;
    double k2_cur;
    double k2_next;
};

/// Coefficients of psi'' = -p(x) psi' - s(x) psi at the stencil:
/// p and p' at the centre, s at all three points.
struct GeneralizedCoeffs {
    double p_cur;
    double dp_cur;
    double s_prev;
    double s_cur;
    double s_next;
};

namespace detail {
// |1 + d^2 c / 12| below this amplifies the step beyond any useful precision
inline constexpr double kDenomFloor = 1e-12;
} // namespace detail

/// One Numerov step for psi'' = -k^2(x) psi: returns psi(x + delta).
inline double numerov_step(const StepTriple& t, const NormalFormCoeffs& c) {
    const double h2_12 = t.delta * t.delta / 12.0;
    const double denom = 1.0 + h2_12 * c.k2_next;
    if (std::abs(denom) < detail::kDenomFloor || !std::isfinite(denom)) {
        throw StepFailure(t.index);
    }
    const double mid = 2.0 * (1.0 - 5.0 * h2_12 * c.k2_cur) * t.psi_cur;
    const double prev = (1.0 + h2_12 * c.k2_prev) * t.psi_prev;
    return (mid - prev) / denom;
}

/// One generalized Numerov step for psi'' = -p psi' - s psi:
/// returns psi(x + delta). Reduces to numerov_step when p = p' = 0
/// with s in the role of k^2.
inline double numerov_step_general(const StepTriple& t, const GeneralizedCoeffs& g) {
    const double d = t.delta;
    const double d2_12 = d * d / 12.0;
    const double denom = 1.0 + g.p_cur * d / 2.0 + (g.s_next + g.dp_cur) * d2_12;
    if (std::abs(denom) < detail::kDenomFloor || !std::isfinite(denom)) {
        throw StepFailure(t.index);
    }
    const double mid = 2.0 * (1.0 - (g.s_cur - g.dp_cur / 5.0) * (5.0 * d2_12)) * t.psi_cur;
    const double prev = (1.0 - g.p_cur * d / 2.0 + (g.s_prev + g.dp_cur) * d2_12) * t.psi_prev;
    return (mid - prev) / denom;
}

/// Normal-form coefficient of y'' + P y' + Q y = 0 rewritten as u'' + q u = 0.
inline double normal_form_q(double P, double dP, double Q) {
    return Q - 0.25 * P * P - 0.5 * dP;
}

/// Second-order central difference (psi_plus - psi_minus) / (2 delta).
inline double central_derivative(double psi_minus, double psi_plus, double delta) {
    return (psi_plus - psi_minus) / (2.0 * delta);
}

} // namespace numerov
