#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "bose2d/errors.hpp"

namespace bose2d {

// Analytic tail descriptor for a radial profile beyond its grid.
struct TailDescriptor {
    enum class Kind { zero, log_of_r_over_d, power_law } kind = Kind::zero;
    double amplitude = 0.0; // multiplies log(r/d) or r^{-exponent}
    double d = 1.0;
    double exponent = 0.0;
};

// Samples of a radial function on a strictly increasing grid, with linear
// interpolation in between and the tail descriptor beyond the last node.
struct RadialProfile {
    std::vector<double> grid;
    std::vector<double> values;
    TailDescriptor tail;

    double operator()(double r) const {
        if (grid.empty()) return 0.0;
        if (r >= grid.back()) {
            switch (tail.kind) {
                case TailDescriptor::Kind::zero: return 0.0;
                case TailDescriptor::Kind::log_of_r_over_d:
                    return tail.amplitude * std::log(r / tail.d);
                case TailDescriptor::Kind::power_law:
                    return tail.amplitude * std::pow(r, -tail.exponent);
            }
        }
        if (r <= grid.front()) return values.front();
        std::size_t lo = 0, hi = grid.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (grid[mid] <= r ? lo : hi) = mid;
        }
        double s = (r - grid[lo]) / (grid[lo + 1] - grid[lo]);
        return (1 - s) * values[lo] + s * values[lo + 1];
    }
};

// Radial Fourier transform samples f^(|p|), with the exact value at p=0.
// For nonnegative radial f the transform is real, even, and maximal at 0.
struct MomentumProfile {
    std::vector<double> grid;   // |p|
    std::vector<double> values; // f^(|p|)
    double at_zero = 0.0;       // integral of f
};

} // namespace bose2d
