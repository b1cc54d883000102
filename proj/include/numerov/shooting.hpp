#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "numerov/errors.hpp"
#include "numerov/grid.hpp"
#include "numerov/potentials.hpp"
#include "numerov/recurrence.hpp"

namespace numerov {

/// Trial energy never crosses the potential inside (a, b): either below the
/// well bottom or the domain is too small to contain the turning point.
class EnergyOutsideWell : public Error {
public:
    explicit EnergyOutsideWell(double eps)
        : Error("no classical turning point inside the domain for eps = " +
                std::to_string(eps) + " (energy below the well or domain too small)"),
          eps(eps) {}

    double eps;
};

/// The left solution vanishes at the match point, so it cannot be rescaled
/// onto the right solution there.
class MatchPointNode : public Error {
public:
    explicit MatchPointNode(std::size_t match_index)
        : Error("left solution has a node at the match point (index " +
                std::to_string(match_index) + ")"),
          match_index(match_index) {}

    std::size_t match_index;
};

enum class MatchRule { OuterTurningPoint, FixedIndex };

/// Boundary seeds and the match-point selection rule.
struct ShootingConfig {
    double seed_left = 1e-6;  // psi(a + delta)
    double seed_right = 1e-6; // psi(b - delta)
    MatchRule match_rule = MatchRule::OuterTurningPoint;
    std::size_t fixed_index = 0;

    void validate() const {
        if (!(seed_left > 0.0) || seed_left > 1e-3) {
            throw Error("shooting config: seed_left must satisfy 0 < seed <= 1e-3");
        }
        if (!(seed_right > 0.0) || seed_right > 1e-3) {
            throw Error("shooting config: seed_right must satisfy 0 < seed <= 1e-3");
        }
    }
};

/// Left and right trial solutions around one match point.
///
/// `left` holds psi^l on grid indices [0, match_index + 1]; `right` holds
/// psi^r on [match_index - 1, n - 1], so right[j] is the sample at grid
/// index match_index - 1 + j. Each side carries one point past the match
/// for the central derivatives.
struct ShootingResult {
    std::vector<double> left;
    std::vector<double> right;
    std::size_t match_index = 0;
    double mismatch = 0.0; // scale-free derivative mismatch g
    double psi_match = 0.0;

    double right_at(std::size_t grid_index) const {
        return right[grid_index - (match_index - 1)];
    }
};

namespace detail {

inline std::size_t clamp_match(std::size_t i, std::size_t n) {
    const std::size_t lo = 1;
    const std::size_t hi = n - 3;
    return i < lo ? lo : (i > hi ? hi : i);
}

} // namespace detail

/// Index of the outer classical turning point: the largest i with
/// V(x_i) <= eps whose right neighbour is classically forbidden (the domain
/// edge counts as forbidden), clamped into [1, n-3]. A FixedIndex rule
/// short-circuits the search and is clamped the same way.
inline std::size_t find_match_index(const PotentialModel& model, EnergyValue eps,
                                    const Grid& grid,
                                    const ShootingConfig& cfg = {}) {
    const std::size_t n = grid.size();
    if (cfg.match_rule == MatchRule::FixedIndex) {
        return detail::clamp_match(cfg.fixed_index, n);
    }
    for (std::size_t i = n; i-- > 0;) {
        if (model.potential(grid.x(i)) <= eps.eps) {
            return detail::clamp_match(i, n);
        }
    }
    throw EnergyOutsideWell(eps.eps);
}

namespace detail {

// Propagated values can cross deep forbidden regions and overflow; pure
// rescaling keeps them representable without changing the solution ray.
inline constexpr double kOverflowGuard = 1e250;
inline constexpr double kOverflowScale = 1e-250;

// Advances one sample in traversal order. `dir` is +1 for the a -> b sweep
// and -1 for b -> a; leftward traversal exchanges the roles of x - delta and
// x + delta, which flips the sign of the first-derivative coefficient p and
// swaps the s samples. The even-order terms are direction-blind.
inline double advance(const PotentialModel& model, EnergyValue eps, const Grid& grid,
                      std::size_t cur_index, int dir, double psi_prev, double psi_cur,
                      std::size_t produced_index) {
    const bool forward = dir > 0;
    const double x_cur = grid.x(cur_index);
    const double x_behind = grid.x(forward ? cur_index - 1 : cur_index + 1);
    const double x_ahead = grid.x(forward ? cur_index + 1 : cur_index - 1);
    StepTriple t{psi_prev, psi_cur, grid.delta(), produced_index};
    if (model.form() == ProblemForm::NormalForm) {
        NormalFormCoeffs c{model.k2(x_behind, eps), model.k2(x_cur, eps),
                           model.k2(x_ahead, eps)};
        return numerov_step(t, c);
    }
    const HydrogenCoeffs mid = model.generalized(x_cur, eps);
    GeneralizedCoeffs g{dir > 0 ? mid.p : -mid.p, mid.dp,
                        model.generalized(x_behind, eps).s, mid.s,
                        model.generalized(x_ahead, eps).s};
    return numerov_step_general(t, g);
}

inline void guard_overflow(std::vector<double>& psi, std::size_t filled) {
    if (std::abs(psi[filled]) > kOverflowGuard) {
        for (std::size_t k = 0; k <= filled; ++k) psi[k] *= kOverflowScale;
    }
}

} // namespace detail

/// Propagates psi^l from psi(a) = 0, psi(a + delta) = seed_left up to one
/// point past the match index. Returned samples sit on grid indices
/// [0, match + 1].
inline std::vector<double> integrate_left(const PotentialModel& model, EnergyValue eps,
                                          const Grid& grid, const ShootingConfig& cfg = {}) {
    cfg.validate();
    const std::size_t match = find_match_index(model, eps, grid, cfg);
    std::vector<double> psi(match + 2);
    psi[0] = 0.0;
    psi[1] = cfg.seed_left;
    for (std::size_t i = 2; i < psi.size(); ++i) {
        psi[i] = detail::advance(model, eps, grid, i - 1, +1, psi[i - 2], psi[i - 1], i);
        detail::guard_overflow(psi, i);
    }
    return psi;
}

/// Mirror of integrate_left: psi^r from psi(b) = 0, psi(b - delta) =
/// seed_right, swept down to grid index match - 1. Returned samples sit on
/// grid indices [match - 1, n - 1] in grid order.
inline std::vector<double> integrate_right(const PotentialModel& model, EnergyValue eps,
                                           const Grid& grid, const ShootingConfig& cfg = {}) {
    cfg.validate();
    const std::size_t n = grid.size();
    const std::size_t match = find_match_index(model, eps, grid, cfg);
    const std::size_t base = match - 1; // grid index of psi.front()
    std::vector<double> psi(n - base);
    psi[psi.size() - 1] = 0.0;
    psi[psi.size() - 2] = cfg.seed_right;
    for (std::size_t j = psi.size() - 2; j-- > 0;) {
        const std::size_t cur = base + j + 1;
        psi[j] = detail::advance(model, eps, grid, cur, -1, psi[j + 2], psi[j + 1], cur - 1);
        // guard scans the filled suffix [j, end)
        if (std::abs(psi[j]) > detail::kOverflowGuard) {
            for (std::size_t k = j; k < psi.size(); ++k) psi[k] *= detail::kOverflowScale;
        }
    }
    return psi;
}

/// Multiplies the left samples by psi^r(x_match) / psi^l(x_match) so the two
/// branches agree at the match point.
inline ShootingResult rescale_left(ShootingResult result) {
    const double left_match = result.left[result.match_index];
    if (std::abs(left_match) < 1e-300) {
        throw MatchPointNode(result.match_index);
    }
    const double right_match = result.right_at(result.match_index);
    const double factor = right_match / left_match;
    for (double& v : result.left) v *= factor;
    return result;
}

namespace detail {

inline ShootingResult shoot_once(const PotentialModel& model, EnergyValue eps,
                                 const Grid& grid, const ShootingConfig& cfg) {
    ShootingResult result;
    result.match_index = find_match_index(model, eps, grid, cfg);
    result.left = integrate_left(model, eps, grid, cfg);
    result.right = integrate_right(model, eps, grid, cfg);
    result = rescale_left(std::move(result));

    const std::size_t m = result.match_index;
    const double d = grid.delta();
    const double dl = central_derivative(result.left[m - 1], result.left[m + 1], d);
    const double dr = central_derivative(result.right_at(m - 1), result.right_at(m + 1), d);
    result.psi_match = result.right_at(m);
    result.mismatch = (dl - dr) / std::max(std::abs(result.psi_match), 1e-12);
    return result;
}

} // namespace detail

/// Runs both integrations at the trial energy, rescales the left branch and
/// returns the scale-free derivative mismatch
///   g = [psi^l'(x_match) - psi^r'(x_match)] / max(|psi_match|, 1e-12).
/// g changes sign across each eigenvalue. If the left solution happens to
/// have a node at the match point, the match index is shifted one step
/// toward a (at most three times) before giving up.
inline ShootingResult mismatch(const PotentialModel& model, EnergyValue eps,
                               const Grid& grid, const ShootingConfig& cfg = {}) {
    cfg.validate();
    ShootingConfig attempt = cfg;
    std::size_t match = find_match_index(model, eps, grid, cfg);
    for (int shift = 0; shift < 3; ++shift) {
        try {
            return detail::shoot_once(model, eps, grid, attempt);
        } catch (const MatchPointNode&) {
            if (match <= 1) break;
            --match;
            attempt.match_rule = MatchRule::FixedIndex;
            attempt.fixed_index = match;
        }
    }
    return detail::shoot_once(model, eps, grid, attempt); // last try propagates the error
}

} // namespace numerov
