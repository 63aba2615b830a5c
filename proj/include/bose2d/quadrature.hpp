#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "bose2d/bessel.hpp"
#include "bose2d/errors.hpp"

namespace bose2d::quad {

struct Result {
    double value = 0.0;
    double error = 0.0; // a-posteriori estimate
};

namespace detail {

// Gauss(7)-Kronrod(15) nodes and weights on [-1,1].
inline constexpr double gk_node[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394,
    0.949107912342759, 0.207784955007898, 0.586087235467691,
    0.864864423359769, 0.991455371120813};
inline constexpr double gk_wg[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870, 0.0, 0.0, 0.0, 0.0};
inline constexpr double gk_wk[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525,
    0.063092092629979, 0.204432940075298, 0.169004726639267,
    0.104790010322250, 0.022935322010529};

template <class F>
inline Result gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double y0 = f(c);
    double g = gk_wg[0] * y0;
    double k = gk_wk[0] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = h * gk_node[i];
        double yi = f(c + dx) + f(c - dx);
        g += gk_wg[i] * yi;
        k += gk_wk[i] * yi;
    }
    g *= h;
    k *= h;
    // |K15 - G7| overestimates the Kronrod error; conservative is fine here
    return {k, std::abs(k - g)};
}

} // namespace detail

// Single non-adaptive G7K15 panel; accurate on intervals spanning at most
// one oscillation arch of the integrand.
template <class F>
inline Result fixed_gk15(const F& f, double a, double b) {
    return detail::gk15(f, a, b);
}

// Adaptive G7K15 on a finite interval.
template <class F>
inline Result integrate(const F& f, double a, double b,
                        double abs_tol = 1e-10, double rel_tol = 1e-10,
                        int max_intervals = 4000) {
    if (a == b) return {0.0, 0.0};
    struct Seg { double a, b, val, err; };
    std::vector<Seg> segs;
    auto r0 = detail::gk15(f, a, b);
    segs.push_back({a, b, r0.value, r0.error});
    double total = r0.value, toterr = r0.error;
    while ((int)segs.size() < max_intervals) {
        double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (toterr <= tol) break;
        // split the worst segment
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err) worst = i;
        Seg s = segs[worst];
        if (s.b - s.a < 1e-15 * (std::abs(s.a) + std::abs(s.b)) || s.err == 0.0)
            break; // cannot refine further
        double m = 0.5 * (s.a + s.b);
        auto rl = detail::gk15(f, s.a, m);
        auto rr = detail::gk15(f, m, s.b);
        total += rl.value + rr.value - s.val;
        toterr += rl.error + rr.error - s.err;
        segs[worst] = {s.a, m, rl.value, rl.error};
        segs.push_back({m, s.b, rr.value, rr.error});
    }
    // recompute sums in a fixed order for determinism
    total = 0.0;
    toterr = 0.0;
    for (const auto& s : segs) { total += s.val; toterr += s.err; }
    return {total, toterr};
}

// Integral over [a, inf) of a function with decaying (non-oscillatory) tail:
// doubling segments until the increment is negligible.
template <class F>
inline Result integrate_to_inf(const F& f, double a, double scale,
                               double abs_tol = 1e-10, double rel_tol = 1e-10,
                               int max_doublings = 200) {
    double lo = a;
    double hi = a + scale;
    Result total{0.0, 0.0};
    double last = 0.0;
    int flat = 0;
    for (int i = 0; i < max_doublings; ++i) {
        auto r = integrate(f, lo, hi, abs_tol * 0.25, rel_tol * 0.25);
        total.value += r.value;
        total.error += r.error;
        last = std::abs(r.value);
        double tol = std::max(abs_tol, rel_tol * std::abs(total.value));
        if (last <= 0.25 * tol) {
            if (++flat >= 2) return total;
        } else {
            flat = 0;
        }
        lo = hi;
        hi = lo + (hi - a);
    }
    throw SlowDecay("integrate_to_inf: tail failed to converge (last increment "
                    + std::to_string(last) + ")");
}

// Integral over [a, inf) of f(r) that oscillates like J0(k r) for large r.
// Split at scaled J0 zeros; past `direct_zeros` of them, treat the
// per-arch contributions as an alternating series and accelerate it with
// iterated Euler averaging.
template <class F>
inline Result integrate_j0_tail(const F& f, double a, double k,
                                double abs_tol = 1e-12, double rel_tol = 1e-12,
                                int direct_zeros = 20, int accel_terms = 24) {
    Result total{0.0, 0.0};
    // zeros of J0(k r) at r = z_s / k
    int s = 1;
    double zs = bessel::j0_zero(s) / k;
    while (zs <= a) zs = bessel::j0_zero(++s) / k;
    double lo = a;
    for (int i = 0; i < direct_zeros; ++i) {
        auto r = integrate(f, lo, zs, abs_tol * 0.1, rel_tol * 0.1);
        total.value += r.value;
        total.error += r.error;
        lo = zs;
        zs = bessel::j0_zero(++s) / k;
    }
    // alternating-arch tail
    std::vector<double> arch(accel_terms);
    for (int i = 0; i < accel_terms; ++i) {
        auto r = integrate(f, lo, zs, abs_tol * 0.1, rel_tol * 0.1);
        arch[i] = r.value;
        total.error += r.error;
        lo = zs;
        zs = bessel::j0_zero(++s) / k;
    }
    // partial sums, then iterated averaging (Euler transform)
    std::vector<double> ps(accel_terms);
    double acc = 0.0;
    for (int i = 0; i < accel_terms; ++i) { acc += arch[i]; ps[i] = acc; }
    for (int pass = 0; pass + 1 < accel_terms; ++pass)
        for (int i = 0; i + pass + 1 < accel_terms; ++i)
            ps[i] = 0.5 * (ps[i] + ps[i + 1]);
    total.value += ps[0];
    total.error += std::abs(ps[0] - ps[1]) + std::abs(arch[accel_terms - 1]) * 1e-3;
    return total;
}

} // namespace bose2d::quad
