#pragma once

#include <cmath>
#include <vector>

#include "bose2d/constants.hpp"

namespace bose2d::bessel {

inline double j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }
inline double j1(double x) {
    double v = std::cyl_bessel_j(1.0, std::abs(x));
    return x < 0 ? -v : v;
}
inline double i0(double x) { return std::cyl_bessel_i(0.0, x); }
inline double i1(double x) { return std::cyl_bessel_i(1.0, x); }
inline double k0(double x) { return std::cyl_bessel_k(0.0, x); }
inline double k1(double x) { return std::cyl_bessel_k(1.0, x); }

// s-th positive zero of J0 (s >= 1). McMahon expansion plus Newton polish;
// accurate to machine precision for all s.
inline double j0_zero(int s) {
    double b = (s - 0.25) * pi;
    double b8 = 8.0 * b;
    double z = b + 1.0 / b8 - 124.0 / (3.0 * b8 * b8 * b8)
             + 120928.0 / (15.0 * b8 * b8 * b8 * b8 * b8);
    for (int it = 0; it < 3; ++it) {
        double f = j0(z);
        double df = -j1(z);
        double dz = f / df;
        z -= dz;
        if (std::abs(dz) < 1e-15 * z) break;
    }
    return z;
}

inline std::vector<double> j0_zeros(int n) {
    std::vector<double> z(n);
    for (int s = 1; s <= n; ++s) z[s - 1] = j0_zero(s);
    return z;
}

// Thread-local cache of J0 zeros, extended geometrically on demand.
// Returns all zeros <= x (possibly none).
inline const std::vector<double>& j0_zeros_upto(double x) {
    thread_local std::vector<double> cache;
    if (cache.empty()) cache = j0_zeros(32);
    while (cache.back() <= x) {
        int n = static_cast<int>(cache.size());
        int target = n * 2;
        for (int s = n + 1; s <= target; ++s) cache.push_back(j0_zero(s));
    }
    return cache;
}

} // namespace bose2d::bessel
