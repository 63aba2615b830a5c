#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "bose2d/errors.hpp"

namespace bose2d::ode {

// One accepted step of a 2-component solution, with derivatives for
// cubic Hermite reconstruction between nodes.
struct Node {
    double t;
    std::array<double, 2> y;
    std::array<double, 2> dy;
};

// Adaptive Dormand-Prince 5(4) for y' = f(t, y), y in R^2.
// Records every accepted step; `max_dt` caps the node spacing so the
// Hermite interpolant stays accurate for downstream quadrature.
template <class F>
inline std::vector<Node> rk45(const F& f, double t0, double t1,
                              std::array<double, 2> y0,
                              double abs_tol = 1e-12, double rel_tol = 1e-12,
                              double max_dt = 0.05) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100,
                            e7 = -1.0 / 40;

    using V = std::array<double, 2>;
    auto axpy = [](V y, double h, const V& k) {
        return V{y[0] + h * k[0], y[1] + h * k[1]};
    };

    std::vector<Node> out;
    double t = t0, dir = (t1 > t0) ? 1.0 : -1.0;
    V y = y0;
    V k1 = f(t, y);
    out.push_back({t, y, k1});
    double h = dir * std::min(max_dt, std::abs(t1 - t0) / 10.0);
    int rejects = 0;
    const int hard_cap = 2000000;
    int steps = 0;
    while (dir * (t1 - t) > 1e-14 * (std::abs(t) + std::abs(t1))) {
        if (++steps > hard_cap)
            throw NonConvergence("rk45: step cap exceeded");
        if (dir * (t + h - t1) > 0) h = t1 - t;
        V k2 = f(t + c2 * h, axpy(y, h * a21, k1));
        V k3 = f(t + c3 * h, {y[0] + h * (a31 * k1[0] + a32 * k2[0]),
                              y[1] + h * (a31 * k1[1] + a32 * k2[1])});
        V k4 = f(t + c4 * h,
                 {y[0] + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
                  y[1] + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1])});
        V k5 = f(t + c5 * h,
                 {y[0] + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
                  y[1] + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])});
        V k6 = f(t + h,
                 {y[0] + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0]),
                  y[1] + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1])});
        V y5 = {y[0] + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0]),
                y[1] + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1])};
        V k7 = f(t + h, y5);
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
            double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(ei) / sc);
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7; // FSAL
            out.push_back({t, y, k7});
            rejects = 0;
        } else if (++rejects > 60) {
            throw NonConvergence("rk45: repeated step rejection at t=" + std::to_string(t));
        }
        double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.2);
        fac = std::min(5.0, std::max(0.2, fac));
        h *= fac;
        if (std::abs(h) > max_dt) h = dir * max_dt;
        if (std::abs(h) < 1e-15 * (std::abs(t) + 1.0))
            throw NonConvergence("rk45: step underflow at t=" + std::to_string(t));
    }
    return out;
}

// Piecewise cubic Hermite evaluation over recorded nodes (component `ic`).
inline double hermite_eval(const std::vector<Node>& nodes, double t, int ic) {
    if (nodes.empty()) throw NonConvergence("hermite_eval: empty solution");
    if (t <= nodes.front().t) return nodes.front().y[ic];
    if (t >= nodes.back().t) return nodes.back().y[ic];
    std::size_t lo = 0, hi = nodes.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        (nodes[mid].t <= t ? lo : hi) = mid;
    }
    const Node& n0 = nodes[lo];
    const Node& n1 = nodes[lo + 1];
    double h = n1.t - n0.t;
    double s = (t - n0.t) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    double h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s);
    double h11 = s * s * (s - 1);
    return h00 * n0.y[ic] + h10 * h * n0.dy[ic] + h01 * n1.y[ic] + h11 * h * n1.dy[ic];
}

} // namespace bose2d::ode
