#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "numerov/errors.hpp"

namespace numerov {

/// Uniform sample grid x_i = a + i * delta, i = 0 .. n-1, with x_{n-1} = b.
class Grid {
public:
    Grid(double a, double b, double delta) : a_(a), b_(b), delta_(delta) {
        if (!(delta > 0.0) || !std::isfinite(delta)) {
            throw Error("grid: delta must be finite and > 0");
        }
        if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
            throw Error("grid: limits must be finite with b > a");
        }
        const double steps = (b - a) / delta;
        const double rounded = std::round(steps);
        if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
            throw Error("grid: (b - a) / delta = " + std::to_string(steps) +
                        " is not an integer step count");
        }
        n_ = static_cast<std::size_t>(rounded) + 1;
        if (n_ < 8) {
            throw Error("grid: need at least 8 samples for two-sided propagation");
        }
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double delta() const { return delta_; }
    std::size_t size() const { return n_; }

    double x(std::size_t i) const { return a_ + static_cast<double>(i) * delta_; }

private:
    double a_;
    double b_;
    double delta_;
    std::size_t n_;
};

} // namespace numerov
