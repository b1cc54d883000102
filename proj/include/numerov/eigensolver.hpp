#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "numerov/errors.hpp"
#include "numerov/grid.hpp"
#include "numerov/potentials.hpp"
#include "numerov/shooting.hpp"

namespace numerov {

/// One sign-change interval of the mismatch function.
struct EnergyBracket {
    double lo;
    double hi;
};

/// Scan ended (well edge or step budget) with fewer brackets than requested.
class ScanIncomplete : public Error {
public:
    ScanIncomplete(std::vector<EnergyBracket> found_, std::size_t requested_, double eps_reached_)
        : Error("energy scan found " + std::to_string(found_.size()) + " of " +
                std::to_string(requested_) + " requested brackets before eps = " +
                std::to_string(eps_reached_)),
          found(std::move(found_)), requested(requested_), eps_reached(eps_reached_) {}

    std::vector<EnergyBracket> found;
    std::size_t requested;
    double eps_reached;
};

/// Bisection ran out of iterations; carries the best estimate.
class ConvergenceFailure : public Error {
public:
    ConvergenceFailure(double best_eps_, double g_, int iters_)
        : Error("bisection did not converge after " + std::to_string(iters_) +
                " iterations (best eps = " + std::to_string(best_eps_) +
                ", |g| = " + std::to_string(std::abs(g_)) + ")"),
          best_eps(best_eps_), g(g_), iters(iters_) {}

    double best_eps;
    double g;
    int iters;
};

/// Normalization of an identically-zero sample array.
class DegenerateSolution : public Error {
public:
    DegenerateSolution() : Error("cannot normalize: wavefunction has zero norm") {}
};

/// Energy-scan and refinement parameters.
struct ScanConfig {
    double delta_e = 1e-3;   // scan increment, dimensionless
    double eps_tol = 1e-9;   // bisection bracket-width tolerance
    double g_tol = 1e-6;     // mismatch acceptance
    int max_bisect = 100;
    std::size_t n_states = 1;
    ShootingConfig shooting{};

    void validate() const {
        if (!(delta_e > 0.0)) throw Error("scan config: delta_e must be > 0");
        if (!(eps_tol >= 1e-13)) throw Error("scan config: eps_tol must be >= 1e-13");
        if (!(g_tol > 0.0)) throw Error("scan config: g_tol must be > 0");
        if (max_bisect < 1 || max_bisect > 200) {
            throw Error("scan config: max_bisect must be in [1, 200]");
        }
        if (n_states < 1) throw Error("scan config: n_states must be >= 1");
        shooting.validate();
    }
};

/// A converged bound state: node count, energy, normalized samples on the
/// full grid, and solver diagnostics.
struct EigenSolution {
    std::size_t index = 0; // node count
    EnergyValue eps{0.0};
    std::vector<double> psi;
    double g_final = 0.0;
    int bisect_iters = 0;
};

/// Number of strict sign changes between consecutive retained samples.
/// Boundary zeros and samples below 1e-12 * max|psi| are ignored.
inline std::size_t count_nodes(std::span<const double> psi) {
    if (psi.size() < 3) throw Error("count_nodes: need at least 3 samples");
    double peak = 0.0;
    for (double v : psi) peak = std::max(peak, std::abs(v));
    const double floor = 1e-12 * peak;
    std::size_t nodes = 0;
    int last_sign = 0;
    for (double v : psi) {
        if (std::abs(v) <= floor) continue;
        const int sign = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++nodes;
        last_sign = sign;
    }
    return nodes;
}

/// Rescales samples to unit trapezoid integral of psi^2 and fixes the sign
/// so the first significant sample is positive.
inline std::vector<double> normalize(std::vector<double> psi, double delta) {
    double sum = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = (i == 0 || i + 1 == psi.size()) ? 0.5 : 1.0;
        sum += w * psi[i] * psi[i];
    }
    const double norm = sum * delta;
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DegenerateSolution();
    double scale = 1.0 / std::sqrt(norm);

    double peak = 0.0;
    for (double v : psi) peak = std::max(peak, std::abs(v));
    for (double v : psi) {
        if (std::abs(v) > 1e-12 * peak) {
            if (v < 0.0) scale = -scale;
            break;
        }
    }
    for (double& v : psi) v *= scale;
    return psi;
}

namespace detail {

struct ScanProbe {
    double eps;
    double g;
    std::size_t left_nodes;
};

inline ScanProbe probe(const PotentialModel& model, const Grid& grid,
                       const ShootingConfig& shooting, double eps) {
    const ShootingResult r = mismatch(model, EnergyValue{eps}, grid, shooting);
    // count up to the match point only: the node count then increments exactly
    // where the mismatch has its pinned-node pole, which is what the scan
    // classification needs (the lookahead sample at match+1 would shift it)
    const std::size_t len = r.left.size() > 3 ? r.left.size() - 1 : r.left.size();
    return {eps, r.mismatch, count_nodes(std::span<const double>(r.left.data(), len))};
}

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

struct ScanState {
    std::vector<EnergyBracket> brackets;
    std::size_t wanted;
};

// Examines one scan interval and records the eigenvalue crossings inside.
//
// The normalized mismatch g changes sign at eigenvalues, but it also has a
// simple pole wherever a node of the left solution sits exactly on the match
// point, and those sign flips are not eigenvalues. The node count of the
// left branch (up to the match point) increments exactly at such a pole and
// stays constant across a root, so:
//   - sign change, node count unchanged  -> eigenvalue bracket
//   - node count changed                 -> pole inside (possibly together
//     with roots on a coarse scan); subdivide until the events separate,
//     then drop the pole intervals
inline void examine_interval(const PotentialModel& model, const Grid& grid,
                             const ShootingConfig& shooting, const ScanProbe& lo,
                             const ScanProbe& hi, int depth, ScanState& state) {
    if (state.brackets.size() >= state.wanted) return;
    const bool sign_change = sign_of(lo.g) != sign_of(hi.g);
    const bool node_change = lo.left_nodes != hi.left_nodes;
    if (!sign_change && !node_change) return;
    if (sign_change && !node_change) {
        state.brackets.push_back({lo.eps, hi.eps});
        return;
    }
    if (depth >= 3) return; // an isolated pinned-node pole: not an eigenvalue
    ScanProbe prev = lo;
    const double step = (hi.eps - lo.eps) / 16.0;
    for (int k = 1; k <= 16 && state.brackets.size() < state.wanted; ++k) {
        const ScanProbe cur = k == 16 ? hi : probe(model, grid, shooting, lo.eps + k * step);
        examine_interval(model, grid, shooting, prev, cur, depth + 1, state);
        prev = cur;
    }
}

/// Upper end of the bound-state scan: zero for hydrogen (continuum above),
/// otherwise the lower of the two boundary potential values.
inline double scan_ceiling(const PotentialModel& model, const Grid& grid) {
    if (model.kind() == PotentialKind::HydrogenRadial) return 0.0;
    return std::min(model.potential(grid.a()), model.potential(grid.b()));
}

} // namespace detail

/// Scan increment used when a config does not fix one: well depth / 2000
/// with a 1e-4 floor.
inline double default_delta_e(const PotentialModel& model, const Grid& grid) {
    const double v_min = potential_minimum(model, grid).second;
    const double depth = detail::scan_ceiling(model, grid) - v_min;
    return std::max(depth > 0.0 ? depth / 2000.0 : 0.0, 1e-4);
}

/// Walks eps = v_min + delta_e, v_min + 2 delta_e, ... recording the scan
/// intervals whose mismatch sign change marks an eigenvalue, until n_states
/// brackets are found or the scan leaves the well. Potentials with no
/// confining rim above the minimum (flat tables) are treated as hard-wall
/// problems and scanned upward under a step budget instead.
inline std::vector<EnergyBracket> scan_brackets(const PotentialModel& model, const Grid& grid,
                                                const ScanConfig& scan) {
    scan.validate();
    model.validate_domain(grid);

    const double v_min = potential_minimum(model, grid).second;
    const double ceiling = detail::scan_ceiling(model, grid);
    const bool hard_wall = !(ceiling > v_min + 1e-12 * std::max(1.0, std::abs(v_min)));
    constexpr std::size_t kMaxScanSteps = 200000;

    detail::ScanState state{{}, scan.n_states};
    detail::ScanProbe prev = detail::probe(model, grid, scan.shooting, v_min + scan.delta_e);
    double eps = prev.eps;
    for (std::size_t step = 2; step <= kMaxScanSteps; ++step) {
        eps = v_min + static_cast<double>(step) * scan.delta_e;
        bool final_interval = false;
        if (!hard_wall && eps >= ceiling) {
            eps = ceiling; // examine the last partial interval up to the edge
            final_interval = true;
        }
        if (!(eps > prev.eps)) break;
        const detail::ScanProbe cur = detail::probe(model, grid, scan.shooting, eps);
        detail::examine_interval(model, grid, scan.shooting, prev, cur, 0, state);
        if (state.brackets.size() >= scan.n_states) return state.brackets;
        if (final_interval) break;
        prev = cur;
    }
    throw ScanIncomplete(std::move(state.brackets), scan.n_states, eps);
}

/// A refined bracket: converged energy, its shooting result, iteration count.
struct RefinedRoot {
    EnergyValue eps{0.0};
    ShootingResult shot;
    int iters = 0;
};

/// Standard bisection on the mismatch inside a sign-change bracket. Stops
/// when the bracket is narrower than eps_tol or |g| drops below g_tol.
inline RefinedRoot refine_bisection(const PotentialModel& model, const Grid& grid,
                                    const EnergyBracket& bracket, const ScanConfig& scan) {
    scan.validate();
    double lo = bracket.lo;
    double hi = bracket.hi;

    // an endpoint sitting on the root (g = 0, or already below tolerance)
    // needs no bisection at all
    ShootingResult at_lo = mismatch(model, EnergyValue{lo}, grid, scan.shooting);
    if (std::abs(at_lo.mismatch) < scan.g_tol) return {EnergyValue{lo}, std::move(at_lo), 0};
    ShootingResult at_hi = mismatch(model, EnergyValue{hi}, grid, scan.shooting);
    if (std::abs(at_hi.mismatch) < scan.g_tol) return {EnergyValue{hi}, std::move(at_hi), 0};
    if (detail::sign_of(at_lo.mismatch) == detail::sign_of(at_hi.mismatch)) {
        throw Error("refine_bisection: bracket endpoints have the same mismatch sign");
    }
    const int lo_sign = detail::sign_of(at_lo.mismatch);

    double mid = 0.5 * (lo + hi);
    ShootingResult at_mid = mismatch(model, EnergyValue{mid}, grid, scan.shooting);
    for (int iter = 1; iter <= scan.max_bisect; ++iter) {
        if (std::abs(at_mid.mismatch) < scan.g_tol || (hi - lo) < scan.eps_tol) {
            return {EnergyValue{mid}, std::move(at_mid), iter};
        }
        if (detail::sign_of(at_mid.mismatch) == lo_sign) {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        at_mid = mismatch(model, EnergyValue{mid}, grid, scan.shooting);
    }
    throw ConvergenceFailure(mid, at_mid.mismatch, scan.max_bisect);
}

/// Solver output: converged states plus non-fatal warnings (skipped node
/// counts, dropped duplicates).
struct SolveResult {
    std::vector<EigenSolution> states;
    std::vector<std::string> warnings;
};

/// Requested more states than the solver could deliver; carries everything
/// that did converge.
class PartialSpectrum : public Error {
public:
    PartialSpectrum(SolveResult partial_, std::size_t requested_, const std::string& why)
        : Error("solved " + std::to_string(partial_.states.size()) + " of " +
                std::to_string(requested_) + " requested states: " + why),
          partial(std::move(partial_)), requested(requested_) {}

    SolveResult partial;
    std::size_t requested;
};

namespace detail {

inline std::vector<double> stitch(const ShootingResult& shot, std::size_t n) {
    std::vector<double> psi(n);
    for (std::size_t i = 0; i < shot.match_index; ++i) psi[i] = shot.left[i];
    for (std::size_t i = shot.match_index; i < n; ++i) psi[i] = shot.right_at(i);
    return psi;
}

} // namespace detail

/// Full pipeline: bracket scan, bisection refinement, left/right stitching at
/// the match point, normalization and node-count labeling. States come back
/// sorted by energy with strictly increasing node counts.
inline SolveResult solve_states(const PotentialModel& model, const Grid& grid,
                                const ScanConfig& scan) {
    scan.validate();
    model.validate_domain(grid);

    SolveResult result;
    std::vector<EnergyBracket> brackets;
    std::string scan_shortfall;
    try {
        brackets = scan_brackets(model, grid, scan);
    } catch (const ScanIncomplete& e) {
        brackets = e.found;
        scan_shortfall = e.what();
    }

    for (const EnergyBracket& bracket : brackets) {
        try {
            RefinedRoot root = refine_bisection(model, grid, bracket, scan);
            if (std::abs(root.shot.mismatch) > 1e3) {
                // width-converged onto a mismatch pole that slipped through
                // the scan classification; not an eigenvalue
                result.warnings.push_back("rejected non-eigenvalue sign change at eps = " +
                                          std::to_string(root.eps.eps));
                continue;
            }
            std::vector<double> psi =
                normalize(detail::stitch(root.shot, grid.size()), grid.delta());
            EigenSolution sol;
            sol.index = count_nodes(psi);
            sol.eps = root.eps;
            sol.psi = std::move(psi);
            sol.g_final = root.shot.mismatch;
            sol.bisect_iters = root.iters;
            result.states.push_back(std::move(sol));
        } catch (const Error& e) {
            result.warnings.push_back("state near eps in [" + std::to_string(bracket.lo) +
                                      ", " + std::to_string(bracket.hi) + "] failed: " + e.what());
        }
    }

    std::sort(result.states.begin(), result.states.end(),
              [](const EigenSolution& a, const EigenSolution& b) { return a.eps.eps < b.eps.eps; });

    // enforce strictly increasing node counts; report gaps, drop duplicates
    std::vector<EigenSolution> ordered;
    long long last_nodes = -1;
    for (EigenSolution& sol : result.states) {
        const long long nodes = static_cast<long long>(sol.index);
        if (nodes <= last_nodes) {
            result.warnings.push_back("dropped duplicate state with node count " +
                                      std::to_string(sol.index) + " at eps = " +
                                      std::to_string(sol.eps.eps));
            continue;
        }
        if (nodes > last_nodes + 1) {
            result.warnings.push_back(
                last_nodes < 0
                    ? "lowest resolved state has node count " + std::to_string(sol.index)
                    : "node counts skip from " + std::to_string(last_nodes) + " to " +
                          std::to_string(sol.index) + "; an intermediate state was not resolved");
        }
        last_nodes = nodes;
        ordered.push_back(std::move(sol));
    }
    result.states = std::move(ordered);

    if (result.states.size() < scan.n_states) {
        throw PartialSpectrum(std::move(result), scan.n_states,
                              scan_shortfall.empty() ? "refinement failures; see warnings"
                                                     : scan_shortfall);
    }
    return result;
}

} // namespace numerov
