#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esopt/error.hpp"

namespace esopt {

/// A point in the decision space (usually a PID gain triple).
using PositionVector = std::vector<double>;

/// Per-coordinate closed box bounds for the decision space.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const noexcept { return lower.size(); }

    bool contains(std::span<const double> x) const {
        if (x.size() != lower.size()) return false;
        for (std::size_t d = 0; d < x.size(); ++d) {
            if (x[d] < lower[d] || x[d] > upper[d]) return false;
        }
        return true;
    }

    double clamp(double value, std::size_t d) const {
        if (value < lower[d]) return lower[d];
        if (value > upper[d]) return upper[d];
        return value;
    }

    void validate() const {
        if (lower.size() != upper.size())
            throw Error(ErrorKind::validation, "bounds: lower/upper length mismatch");
        if (lower.empty())
            throw Error(ErrorKind::validation, "bounds: empty");
        for (std::size_t d = 0; d < lower.size(); ++d) {
            if (!(lower[d] < upper[d]))
                throw Error(ErrorKind::validation,
                            "bounds: lower must be strictly below upper in coordinate " +
                                std::to_string(d));
        }
    }
};

/// Uniform box bounds [lo, hi]^n.
inline Bounds uniform_bounds(double lo, double hi, std::size_t n) {
    return Bounds{std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

} // namespace esopt
