#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "numerov/errors.hpp"
#include "numerov/grid.hpp"

namespace numerov {

/// Dimensionless trial energy. Units are hbar*omega for the oscillator and
/// e^2/(2 a_B) (one Rydberg) for the radial hydrogen problem.
struct EnergyValue {
    double eps;
};

/// Rydberg energy in electron-volts; converts hydrogen eps to E(eV).
inline constexpr double kRydbergEv = 13.605693;

inline double eps_to_ev(EnergyValue e) { return e.eps * kRydbergEv; }

/// k^2(x) = 2 (eps - x^2/2) for the dimensionless oscillator.
inline double harmonic_k2(double x, EnergyValue e) {
    return 2.0 * (e.eps - 0.5 * x * x);
}

/// Centrifugal barrier plus Coulomb term, l(l+1)/x^2 - 2/x, in units of
/// e^2/(2 a_B) with x = r/a_B.
inline double effective_potential(double x, int l) {
    if (!(x > 0.0)) {
        throw DomainError("effective_potential: x must be > 0 (Coulomb singularity)");
    }
    const double ll1 = static_cast<double>(l) * (l + 1);
    return ll1 / (x * x) - 2.0 / x;
}

struct HydrogenCoeffs {
    double p;
    double dp;
    double s;
};

/// First-derivative coefficient p = 2/x, its derivative, and s = eps - V_eff
/// for the radial equation R'' = -p R' - s R.
inline HydrogenCoeffs hydrogen_coeffs(double x, EnergyValue e, int l) {
    if (!(x > 0.0)) {
        throw DomainError("hydrogen_coeffs: x must be > 0 (Coulomb singularity)");
    }
    return {2.0 / x, -2.0 / (x * x), e.eps - effective_potential(x, l)};
}

/// One (x, V) row of a tabulated potential.
struct TableSample {
    double x;
    double v;
};

enum class PotentialKind { Harmonic, HydrogenRadial, CustomTable };
enum class ProblemForm { NormalForm, Generalized };

/// A concrete eigenproblem: the potential V(x) used by the turning-point
/// logic plus the recurrence coefficients for the chosen form.
///
/// Harmonic and CustomTable are normal-form problems (psi'' = -k^2 psi);
/// HydrogenRadial keeps its first-derivative term and is solved with the
/// generalized kernel. Tabulated potentials are interpolated linearly and
/// use k^2 = eps - V(x).
class PotentialModel {
public:
    static PotentialModel harmonic() {
        return PotentialModel(PotentialKind::Harmonic, 0, {});
    }

    static PotentialModel hydrogen_radial(int l) {
        if (l < 0 || l > 10) {
            throw DomainError("hydrogen_radial: l must be in [0, 10]");
        }
        return PotentialModel(PotentialKind::HydrogenRadial, l, {});
    }

    static PotentialModel custom_table(std::vector<TableSample> samples) {
        if (samples.size() < 2) {
            throw DomainError("custom_table: need at least two samples");
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!std::isfinite(samples[i].x) || !std::isfinite(samples[i].v)) {
                throw DomainError("custom_table: non-finite sample at row " + std::to_string(i));
            }
            if (i > 0 && !(samples[i].x > samples[i - 1].x)) {
                throw DomainError("custom_table: x values must be strictly increasing (row " +
                                  std::to_string(i) + ")");
            }
        }
        return PotentialModel(PotentialKind::CustomTable, 0, std::move(samples));
    }

    PotentialKind kind() const { return kind_; }
    int l() const { return l_; }

    ProblemForm form() const {
        return kind_ == PotentialKind::HydrogenRadial ? ProblemForm::Generalized
                                                      : ProblemForm::NormalForm;
    }

    /// V(x) as compared against eps by the turning-point search.
    double potential(double x) const {
        switch (kind_) {
        case PotentialKind::Harmonic:
            return 0.5 * x * x;
        case PotentialKind::HydrogenRadial:
            return effective_potential(x, l_);
        case PotentialKind::CustomTable:
            return table_value(x);
        }
        return 0.0; // unreachable
    }

    /// Normal-form coefficient k^2(x, eps). Harmonic uses hbar*omega units
    /// (factor 2); tables use k^2 = eps - V directly.
    double k2(double x, EnergyValue e) const {
        switch (kind_) {
        case PotentialKind::Harmonic:
            return harmonic_k2(x, e);
        case PotentialKind::CustomTable:
            return e.eps - table_value(x);
        case PotentialKind::HydrogenRadial:
            throw DomainError("k2: hydrogen is a generalized-form problem");
        }
        return 0.0; // unreachable
    }

    /// Generalized coefficients (p, p', s) at x. Hydrogen only.
    HydrogenCoeffs generalized(double x, EnergyValue e) const {
        if (kind_ != PotentialKind::HydrogenRadial) {
            throw DomainError("generalized: model has no first-derivative term");
        }
        return hydrogen_coeffs(x, e, l_);
    }

    /// Throws unless every grid point lies inside the model's domain.
    void validate_domain(const Grid& grid) const {
        if (kind_ == PotentialKind::HydrogenRadial && !(grid.a() > 0.0)) {
            throw DomainError("hydrogen grid must start at x > 0");
        }
        if (kind_ == PotentialKind::CustomTable) {
            if (grid.a() < table_.front().x - 1e-12 || grid.b() > table_.back().x + 1e-12) {
                throw DomainError("custom table does not cover the solve domain [" +
                                  std::to_string(grid.a()) + ", " + std::to_string(grid.b()) + "]");
            }
        }
    }

    const std::vector<TableSample>& table() const { return table_; }

private:
    PotentialModel(PotentialKind kind, int l, std::vector<TableSample> table)
        : kind_(kind), l_(l), table_(std::move(table)) {}

    double table_value(double x) const {
        // piecewise-linear interpolation, clamped to the table range
        if (x <= table_.front().x) return table_.front().v;
        if (x >= table_.back().x) return table_.back().v;
        auto it = std::upper_bound(table_.begin(), table_.end(), x,
                                   [](double xv, const TableSample& s) { return xv < s.x; });
        const TableSample& hi = *it;
        const TableSample& lo = *(it - 1);
        const double t = (x - lo.x) / (hi.x - lo.x);
        return lo.v + t * (hi.v - lo.v);
    }

    PotentialKind kind_;
    int l_;
    std::vector<TableSample> table_;
};

/// Reads a two-column (x, V) table; '#' starts a comment, blank lines skipped.
inline std::vector<TableSample> read_potential_table(std::istream& in) {
    std::vector<TableSample> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double x, v;
        if (!(row >> x)) continue; // blank or comment-only
        if (!(row >> v)) {
            throw DomainError("potential table line " + std::to_string(lineno) +
                              ": expected two numeric columns");
        }
        double extra;
        if (row >> extra) {
            throw DomainError("potential table line " + std::to_string(lineno) +
                              ": more than two columns");
        }
        samples.push_back({x, v});
    }
    return samples;
}

/// Grid point with the smallest V and its value. The harmonic well bottom is
/// reported analytically as (0, 0) whenever the domain contains it.
inline std::pair<double, double> potential_minimum(const PotentialModel& model,
                                                   const Grid& grid) {
    if (model.kind() == PotentialKind::Harmonic && grid.a() <= 0.0 && grid.b() >= 0.0) {
        return {0.0, 0.0};
    }
    double x_min = grid.x(0);
    double v_min = model.potential(x_min);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = model.potential(grid.x(i));
        if (v < v_min) {
            v_min = v;
            x_min = grid.x(i);
        }
    }
    return {x_min, v_min};
}

} // namespace numerov
