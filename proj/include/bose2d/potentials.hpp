#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bose2d/bessel.hpp"
#include "bose2d/constants.hpp"
#include "bose2d/errors.hpp"
#include "bose2d/ode.hpp"
#include "bose2d/profiles.hpp"
#include "bose2d/quadrature.hpp"

namespace bose2d::potentials {

inline constexpr double inf = std::numeric_limits<double>::infinity();

enum class Kind {
    hard_core,
    soft_disk,
    piecewise_constant,
    shell_measure,
    tabulated,
    power_law_tail,
};

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::hard_core: return "hard_core";
        case Kind::soft_disk: return "soft_disk";
        case Kind::piecewise_constant: return "piecewise_constant";
        case Kind::shell_measure: return "shell_measure";
        case Kind::tabulated: return "tabulated";
        case Kind::power_law_tail: return "power_law_tail";
    }
    return "?";
}

// A radial two-body potential. All heights are nonnegative; the shell kind
// is a surface measure kept symbolic (radius + total mass), never sampled.
// `cutoff`/`inner_cutoff` restrict the support to inner_cutoff < r <= cutoff;
// they let truncations stay exact for every kind.
struct PotentialSpec {
    Kind kind = Kind::soft_disk;

    double core_radius = 0.0;                 // hard_core
    double height = 0.0, radius = 0.0;        // soft_disk
    std::vector<double> breakpoints;          // piecewise: r0 < ... < rn
    std::vector<double> heights;              // piecewise: h1..hn on (r_{i-1}, r_i]
    double shell_radius = 0.0, shell_mass = 0.0; // shell_measure
    std::vector<double> tab_r, tab_v;         // tabulated, linear interp
    std::shared_ptr<PotentialSpec> inner;     // power_law_tail inner part
    double tail_c0 = 0.0, tail_eta0 = 0.0, tail_aref = 0.0;

    double cutoff = inf;       // v := v * 1_{r <= cutoff}
    double inner_cutoff = 0.0; // v := v * 1_{r > inner_cutoff}

    static PotentialSpec hard_core(double a) {
        PotentialSpec p;
        p.kind = Kind::hard_core;
        p.core_radius = a;
        p.validate();
        return p;
    }
    static PotentialSpec soft_disk(double v0, double R) {
        PotentialSpec p;
        p.kind = Kind::soft_disk;
        p.height = v0;
        p.radius = R;
        p.validate();
        return p;
    }
    static PotentialSpec piecewise(std::vector<double> r, std::vector<double> h) {
        PotentialSpec p;
        p.kind = Kind::piecewise_constant;
        p.breakpoints = std::move(r);
        p.heights = std::move(h);
        p.validate();
        return p;
    }
    static PotentialSpec shell(double b, double mass) {
        PotentialSpec p;
        p.kind = Kind::shell_measure;
        p.shell_radius = b;
        p.shell_mass = mass;
        p.validate();
        return p;
    }
    static PotentialSpec tabulated(std::vector<double> r, std::vector<double> v) {
        PotentialSpec p;
        p.kind = Kind::tabulated;
        p.tab_r = std::move(r);
        p.tab_v = std::move(v);
        p.validate();
        return p;
    }
    static PotentialSpec power_law_tail(PotentialSpec inner_spec, double c0,
                                        double eta0, double aref) {
        PotentialSpec p;
        p.kind = Kind::power_law_tail;
        p.inner = std::make_shared<PotentialSpec>(std::move(inner_spec));
        p.tail_c0 = c0;
        p.tail_eta0 = eta0;
        p.tail_aref = aref;
        p.validate();
        return p;
    }

    void validate() const {
        auto positive = [](double x, const char* what) {
            if (!(x > 0.0))
                throw Error(std::string("PotentialSpec: ") + what + " must be positive");
        };
        switch (kind) {
            case Kind::hard_core:
                positive(core_radius, "hard-core radius");
                break;
            case Kind::soft_disk:
                positive(radius, "soft-disk radius");
                if (height < 0) throw Error("PotentialSpec: negative height");
                break;
            case Kind::piecewise_constant: {
                if (breakpoints.size() < 2 || heights.size() + 1 != breakpoints.size())
                    throw Error("PotentialSpec: piecewise sizes mismatch");
                if (breakpoints.front() < 0)
                    throw Error("PotentialSpec: negative breakpoint");
                for (std::size_t i = 1; i < breakpoints.size(); ++i)
                    if (!(breakpoints[i] > breakpoints[i - 1]))
                        throw Error("PotentialSpec: breakpoints not increasing");
                for (double h : heights)
                    if (h < 0) throw Error("PotentialSpec: negative height");
                break;
            }
            case Kind::shell_measure:
                positive(shell_radius, "shell radius");
                positive(shell_mass, "shell mass");
                break;
            case Kind::tabulated: {
                if (tab_r.size() < 2 || tab_r.size() != tab_v.size())
                    throw Error("PotentialSpec: tabulated sizes mismatch");
                positive(tab_r.front(), "first grid radius");
                for (std::size_t i = 1; i < tab_r.size(); ++i)
                    if (!(tab_r[i] > tab_r[i - 1]))
                        throw Error("PotentialSpec: grid not increasing");
                for (double v : tab_v)
                    if (v < 0) throw Error("PotentialSpec: negative value");
                break;
            }
            case Kind::power_law_tail:
                if (!inner) throw Error("PotentialSpec: missing inner spec");
                inner->validate();
                positive(tail_c0, "tail C0");
                positive(tail_aref, "tail reference length");
                if (!(tail_eta0 > 0.0))
                    throw DivergentTail("power-law tail needs eta0 > 0 for a finite "
                                        "log^2-weighted tail integral");
                break;
        }
    }

    bool is_l1() const {
        return kind != Kind::hard_core && kind != Kind::shell_measure;
    }

    bool compactly_supported() const {
        if (kind == Kind::power_law_tail) return cutoff < inf;
        return true;
    }

    // radius of {v > 0} after cutoffs (ignoring the symbolic shell weight)
    double support_radius() const {
        double natural = 0.0;
        switch (kind) {
            case Kind::hard_core: natural = core_radius; break;
            case Kind::soft_disk: natural = radius; break;
            case Kind::piecewise_constant: natural = breakpoints.back(); break;
            case Kind::shell_measure: natural = shell_radius; break;
            case Kind::tabulated: natural = tab_r.back(); break;
            case Kind::power_law_tail: natural = inf; break;
        }
        return std::min(natural, cutoff);
    }

    double tail_start() const { return tail_c0 * tail_aref; }

    // pointwise value; +inf inside a hard core; shells have no pointwise value
    double operator()(double r) const {
        if (kind == Kind::shell_measure)
            throw Error("shell measure has no pointwise values");
        if (r <= inner_cutoff || r > cutoff) return 0.0;
        switch (kind) {
            case Kind::hard_core:
                return r <= core_radius ? inf : 0.0;
            case Kind::soft_disk:
                return r <= radius ? height : 0.0;
            case Kind::piecewise_constant: {
                if (r > breakpoints.back() || r <= breakpoints.front()) return 0.0;
                auto it = std::lower_bound(breakpoints.begin() + 1, breakpoints.end(), r);
                return heights[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
            }
            case Kind::tabulated: {
                if (r > tab_r.back()) return 0.0;
                if (r <= tab_r.front()) return tab_v.front();
                std::size_t lo = 0, hi = tab_r.size() - 1;
                while (hi - lo > 1) {
                    std::size_t mid = (lo + hi) / 2;
                    (tab_r[mid] <= r ? lo : hi) = mid;
                }
                double s = (r - tab_r[lo]) / (tab_r[lo + 1] - tab_r[lo]);
                return (1 - s) * tab_v[lo] + s * tab_v[lo + 1];
            }
            case Kind::power_law_tail: {
                if (r >= tail_start())
                    return tail_c0 / (r * r) * std::pow(tail_aref / r, tail_eta0);
                return (*inner)(r);
            }
            default:
                return 0.0;
        }
    }

    // radii where v is non-smooth; ODE and quadrature restart there
    std::vector<double> discontinuities() const {
        std::vector<double> d;
        switch (kind) {
            case Kind::hard_core: d = {core_radius}; break;
            case Kind::soft_disk: d = {radius}; break;
            case Kind::piecewise_constant: d = breakpoints; break;
            case Kind::shell_measure: d = {shell_radius}; break;
            case Kind::tabulated: d = tab_r; break;
            case Kind::power_law_tail:
                d = inner->discontinuities();
                d.push_back(tail_start());
                break;
        }
        if (inner_cutoff > 0) d.push_back(inner_cutoff);
        if (cutoff < inf) d.push_back(cutoff);
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        return d;
    }

    // mass above radius: integral over {|x| >= r} of v (2D), exact per kind
    double mass_above(double r) const;
    double total_integral() const { return mass_above(0.0); }
};

namespace detail {

// one piecewise-smooth piece of r -> v(r) reduced over cutoffs
inline double piece_integral_2d(const PotentialSpec& p, double lo, double hi) {
    // 2*pi * int_lo^hi v(r) r dr on a smooth piece, by quadrature
    auto f = [&](double r) { return p(r) * r; };
    auto res = quad::integrate(f, lo, hi, 1e-13, 1e-13);
    return 2.0 * pi * res.value;
}

} // namespace detail

inline double PotentialSpec::mass_above(double r) const {
    if (kind == Kind::shell_measure) {
        bool shell_alive = shell_radius <= cutoff && shell_radius > inner_cutoff;
        return (shell_alive && r <= shell_radius) ? shell_mass : 0.0;
    }
    if (kind == Kind::hard_core)
        throw NotIntegrable("hard core has infinite integral");
    double lo = std::max(r, inner_cutoff);
    double total = 0.0;
    if (kind == Kind::power_law_tail) {
        double ts = tail_start();
        double hi_inner = std::min({ts, cutoff, inner->support_radius()});
        if (lo < hi_inner) {
            PotentialSpec in = *inner;
            in.inner_cutoff = std::max(in.inner_cutoff, inner_cutoff);
            in.cutoff = std::min(in.cutoff, cutoff);
            total += in.mass_above(lo) - (hi_inner < in.support_radius()
                                              ? in.mass_above(hi_inner)
                                              : 0.0);
        }
        double tlo = std::max(lo, ts), thi = cutoff;
        if (tlo < thi) {
            // 2*pi*C0*aref^eta0 * int r^{-1-eta0} dr
            double c = 2.0 * pi * tail_c0 * std::pow(tail_aref, tail_eta0) / tail_eta0;
            double upper = (thi == inf) ? 0.0 : std::pow(thi, -tail_eta0);
            total += c * (std::pow(tlo, -tail_eta0) - upper);
        }
        return total;
    }
    // compact L1 kinds: integrate piecewise (analytic-grade via tight quadrature)
    std::vector<double> cuts = discontinuities();
    double prev = lo;
    for (double c : cuts) {
        if (c <= lo) continue;
        double hi = std::min(c, cutoff);
        if (hi > prev) total += detail::piece_integral_2d(*this, prev, hi);
        prev = hi;
        if (prev >= cutoff) break;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Scattering machinery
// ---------------------------------------------------------------------------

struct SolverOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_dlogt = 0.02;     // node spacing cap in log r
    double start_fraction = 1e-8; // shooting start: r0 = start_fraction * support
};

// Raw zero-energy radial solution, integrated in t = log r with
// y = (phi, r phi'). Normalized so that r phi' = 1 outside the support,
// i.e. phi(r) = log(r/a) there.
struct RadialSolution {
    std::vector<ode::Node> nodes; // t = log r
    double r_start = 0.0;
    double support = 0.0; // radius beyond which phi = log(r/a)
    double a = 0.0;       // scattering length
    double a_check = 0.0; // estimate from the previous exterior node

    double phi0(double r) const {
        if (r >= support) return std::log(r / a);
        if (r <= r_start) return nodes.front().y[0];
        return ode::hermite_eval(nodes, std::log(r), 0);
    }
    // r d(phi0)/dr
    double rphi0_prime(double r) const {
        if (r >= support) return 1.0;
        if (r <= r_start) return nodes.front().y[1];
        return ode::hermite_eval(nodes, std::log(r), 1);
    }
};

namespace detail {

inline RadialSolution shoot(const PotentialSpec& p, const SolverOptions& opt) {
    if (!p.is_l1())
        throw HardCoreNotL1("shooting solver needs an L1 potential");
    double support = p.support_radius();
    if (!(support < inf))
        throw NotIntegrable("shooting solver needs compact support");

    std::vector<double> cuts = p.discontinuities();
    cuts.push_back(support);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // start well below the smallest structural scale, not the (possibly huge)
    // truncation radius
    double scale = support;
    for (double c : cuts)
        if (c > 0) { scale = std::min(scale, c); break; }
    double r0 = scale * opt.start_fraction;

    // -Delta phi + v phi / 2 = 0 radially; in t = log r with psi = r phi':
    //   dphi/dt = psi,  dpsi/dt = v(e^t) e^{2t} phi / 2
    // Pieces are (lo, hi]; evaluations are nudged off the left edge so a
    // discontinuity at lo never leaks into the piece.
    auto make_rhs = [&p](double lo_r, double hi_r) {
        return [&p, lo_r, hi_r](double t, std::array<double, 2> y) {
            double r = std::exp(t);
            if (r <= lo_r) r = lo_r * (1.0 + 1e-13);
            if (r > hi_r) r = hi_r;
            return std::array<double, 2>{y[1], 0.5 * p(r) * r * r * y[0]};
        };
    };

    std::vector<ode::Node> nodes;
    // regular solution series: phi = 1 + v(0+) r^2 / 8, so r phi' = v(0+) r^2 / 4
    std::array<double, 2> y{1.0, 0.25 * p(r0 * (1.0 + 1e-13)) * r0 * r0};
    double t = std::log(r0);
    double prev_r = r0;
    for (double c : cuts) {
        if (c <= r0 || c > support) continue;
        double tc = std::log(c);
        if (tc <= t) continue;
        auto part = ode::rk45(make_rhs(prev_r, c), t, tc, y, opt.abs_tol,
                              opt.rel_tol, opt.max_dlogt);
        if (nodes.empty())
            nodes = std::move(part);
        else
            nodes.insert(nodes.end(), part.begin() + 1, part.end());
        y = nodes.back().y;
        t = tc;
        prev_r = c;
    }
    // one exterior stretch: v = 0 there, checks the log asymptote
    {
        double te = t + 0.25;
        auto rhs = make_rhs(support, inf);
        auto part = ode::rk45(rhs, t, te, y, opt.abs_tol, opt.rel_tol, opt.max_dlogt);
        double phiR = part.front().y[0], psiR = part.front().y[1];
        double phiE = part.back().y[0], psiE = part.back().y[1];
        RadialSolution sol;
        sol.r_start = r0;
        sol.support = support;
        if (psiR <= 0.0) {
            // identically-zero potential: minimizer is phi == 1
            sol.a = 0.0;
            sol.a_check = 0.0;
            sol.nodes = std::move(nodes);
            return sol;
        }
        sol.a = support * std::exp(-phiR / psiR);
        sol.a_check = std::exp(part.back().t) * std::exp(-phiE / psiE);
        double spread = std::abs(sol.a - sol.a_check) / sol.a;
        if (spread > 1e3 * opt.rel_tol + 1e-11)
            throw NonConvergence("shooting: exterior log asymptote inconsistent, "
                                 "relative spread " + std::to_string(spread));
        // normalize so that r phi' = 1 outside the support
        double s = 1.0 / psiR;
        for (auto& n : nodes) {
            n.y[0] *= s;
            n.y[1] *= s;
            n.dy[0] *= s;
            n.dy[1] *= s;
        }
        sol.nodes = std::move(nodes);
        return sol;
    }
}

} // namespace detail

// Modified-Bessel transfer matrix across constant-height pieces. Exact up to
// the special-function evaluations; serves as the analytic route for disks
// and piecewise-constant potentials.
inline double bessel_matching_scattering_length(const PotentialSpec& p) {
    std::vector<double> r;
    std::vector<double> h;
    if (p.kind == Kind::soft_disk) {
        r = {p.radius};
        h = {p.height};
    } else if (p.kind == Kind::piecewise_constant) {
        // prepend the implicit zero piece [0, r0]
        r = p.breakpoints;
        h = p.heights;
        h.insert(h.begin(), 0.0);
    } else {
        throw Error("bessel matching needs a piecewise-constant potential");
    }

    // state (phi, phi') propagated from the regular solution at r=0
    double phi = 1.0, dphi = 0.0;
    double lo = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        double hi = (p.kind == Kind::soft_disk) ? r[0]
                    : (i == 0 ? r[0] : r[i]);
        double height = (p.kind == Kind::soft_disk) ? h[0] : h[i];
        if (hi <= lo) continue;
        if (height == 0.0) {
            // phi = c1 + c2 log r
            if (lo == 0.0) {
                // regular: constant
            } else {
                double c2 = lo * dphi;
                double c1 = phi - c2 * std::log(lo);
                phi = c1 + c2 * std::log(hi);
                dphi = c2 / hi;
            }
        } else {
            double kappa = std::sqrt(0.5 * height);
            if (lo == 0.0) {
                phi = bessel::i0(kappa * hi);
                dphi = kappa * bessel::i1(kappa * hi);
            } else {
                // solve c1 I0 + c2 K0 = phi, kappa(c1 I1 - c2 K1) = dphi at lo
                double I0 = bessel::i0(kappa * lo), K0 = bessel::k0(kappa * lo);
                double I1 = bessel::i1(kappa * lo), K1 = bessel::k1(kappa * lo);
                // Wronskian: I0 K1 + I1 K0 = 1/(kappa lo)
                double det = kappa * (I0 * K1 + I1 * K0);
                double c1 = (phi * kappa * K1 + dphi * K0) / det;
                double c2 = (phi * kappa * I1 - dphi * I0) / det;
                phi = c1 * bessel::i0(kappa * hi) + c2 * bessel::k0(kappa * hi);
                dphi = kappa * (c1 * bessel::i1(kappa * hi) - c2 * bessel::k1(kappa * hi));
            }
        }
        lo = hi;
    }
    double R = lo;
    if (dphi <= 0.0) return 0.0;
    return R * std::exp(-phi / (R * dphi));
}

namespace detail {

// closed-form log^2-weighted power-law tail integral from radius R:
//   (1/2) int_{|x|>R} v log(|x|/a)^2 dx / log(R/a)^2
inline double power_tail_bound(const PotentialSpec& p, double R, double a) {
    double eta = p.tail_eta0;
    double T0 = std::log(R / a);
    double pref = pi * p.tail_c0 * std::pow(p.tail_aref / R, eta);
    return pref * (1.0 / eta + 2.0 / (eta * eta * T0) + 2.0 / (eta * eta * eta * T0 * T0));
}

} // namespace detail

// Scattering length a(v). Hard cores and shells go through closed forms,
// L1 potentials through ODE shooting, power-law tails through truncation
// with the certified cutting bound.
inline double scattering_length(const PotentialSpec& p,
                                const SolverOptions& opt = {}) {
    p.validate();
    switch (p.kind) {
        case Kind::hard_core:
            return std::min(p.core_radius, p.cutoff);
        case Kind::shell_measure: {
            if (p.cutoff < p.shell_radius || p.inner_cutoff >= p.shell_radius)
                return 0.0;
            // phi constant inside, log outside; the jump condition at b gives
            // log(b/a) = 4 pi b / mass ... with mass = lambda * 2 pi b
            return p.shell_radius * std::exp(-4.0 * pi / p.shell_mass);
        }
        case Kind::power_law_tail: {
            // a(v) = lim a(v 1_{B(0,n)}): grow the truncation radius until
            // the cutting-lemma bracket pins a to the requested tolerance
            double R = std::max(4.0 * p.tail_start(),
                                2.0 * p.inner->support_radius());
            double a = 0.0;
            for (int it = 0; it < 200; ++it) {
                PotentialSpec trunc = p;
                trunc.cutoff = std::min(p.cutoff, R);
                double aR = detail::shoot(trunc, opt).a;
                if (p.cutoff <= R) return aR; // the potential was already compact
                double bound = detail::power_tail_bound(p, R, aR);
                double y = 2.0 * pi / std::log(R / aR);
                double a_hi = R * std::exp(-2.0 * pi / (y + bound));
                a = aR;
                if ((a_hi - aR) <= opt.rel_tol * aR + opt.abs_tol) return 0.5 * (aR + a_hi);
                R *= 2.0;
            }
            throw NonConvergence("power-law tail: truncation radius did not converge");
        }
        default:
            return detail::shoot(p, opt).a;
    }
}

// Rayleigh-quotient minimization over piecewise-linear functions on a log
// grid with phi(Rtilde) = 1. Independent variational oracle for a(v);
// O(h^2) accurate, used only as a cross-check. The grid snaps to the
// potential's discontinuities so no element straddles a jump.
inline double variational_scattering_length(const PotentialSpec& p, double rtilde,
                                            int n_elements = 4000) {
    if (!p.is_l1() && p.kind != Kind::hard_core)
        throw Error("variational oracle needs an L1 potential or hard core");
    double support = p.support_radius();
    if (!(rtilde > support)) throw Error("variational oracle needs Rtilde > support");
    bool hard = (p.kind == Kind::hard_core);
    double r_lo = hard ? support : support * 1e-8;
    double t0 = std::log(r_lo), t1 = std::log(rtilde);

    // node layout: discontinuity-aligned, roughly uniform in log r
    std::vector<double> knots{t0};
    if (!hard)
        for (double c : p.discontinuities())
            if (c > r_lo && c < rtilde) knots.push_back(std::log(c));
    knots.push_back(t1);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> t;
    double h_target = (t1 - t0) / n_elements;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        int sub = std::max(1, (int)std::ceil((knots[k + 1] - knots[k]) / h_target));
        for (int i = 0; i < sub; ++i)
            t.push_back(knots[k] + (knots[k + 1] - knots[k]) * i / sub);
    }
    t.push_back(t1);
    int n = (int)t.size() - 1;

    constexpr double gauss = 0.288675134594812882; // 1/(2 sqrt(3))
    auto pot_weight = [&](int e, double tg) {
        double r = std::exp(tg);
        return 0.25 * (t[e + 1] - t[e]) * (hard ? 0.0 : p(r)) * r * r;
    };

    // E[phi] = 2 pi int ((dphi/dt)^2 + v(e^t) e^{2t} phi^2 / 2) dt
    std::vector<double> diag(n + 1, 0.0), off(n, 0.0);
    for (int e = 0; e < n; ++e) {
        double ta = t[e], tb = t[e + 1], h = tb - ta;
        for (double tg : {0.5 * (ta + tb) - h * gauss, 0.5 * (ta + tb) + h * gauss}) {
            double w = pot_weight(e, tg);
            double sa = (tb - tg) / h, sb = (tg - ta) / h;
            diag[e] += w * sa * sa;
            diag[e + 1] += w * sb * sb;
            off[e] += w * sa * sb;
        }
        diag[e] += 1.0 / h;
        diag[e + 1] += 1.0 / h;
        off[e] += -1.0 / h;
    }
    // boundary: phi(t1) = 1; for the hard core also phi(t0) = 0
    int lo = hard ? 1 : 0;
    int m = n - lo; // unknowns u_lo .. u_{n-1}
    std::vector<double> d(m), rhs(m, 0.0), sub(m > 0 ? m - 1 : 0);
    for (int i = 0; i < m; ++i) d[i] = diag[lo + i];
    for (int i = 0; i + 1 < m; ++i) sub[i] = off[lo + i];
    rhs[m - 1] = -off[n - 1];
    for (int i = 1; i < m; ++i) { // Thomas, SPD tridiagonal
        double w = sub[i - 1] / d[i - 1];
        d[i] -= w * sub[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> u(m);
    u[m - 1] = rhs[m - 1] / d[m - 1];
    for (int i = m - 2; i >= 0; --i) u[i] = (rhs[i] - sub[i] * u[i + 1]) / d[i];

    // E evaluated elementwise; the gradient part as a difference square,
    // which avoids the 1/h cancellation of a u^T K u assembly
    std::vector<double> full(n + 1, 0.0);
    for (int i = 0; i < m; ++i) full[lo + i] = u[i];
    full[n] = 1.0;
    double E = 0.0;
    for (int e = 0; e < n; ++e) {
        double ta = t[e], tb = t[e + 1], h = tb - ta;
        double du = full[e + 1] - full[e];
        E += du * du / h;
        for (double tg : {0.5 * (ta + tb) - h * gauss, 0.5 * (ta + tb) + h * gauss}) {
            double w = pot_weight(e, tg);
            double sa = (tb - tg) / h, sb = (tg - ta) / h;
            double uval = sa * full[e] + sb * full[e + 1];
            E += w * uval * uval;
        }
    }
    E *= 2.0 * pi;
    // E = 2 pi / log(rtilde / a)
    return rtilde * std::exp(-2.0 * pi / E);
}

// Normalization of the scattering solution: either the parameter delta or
// the radius Rtilde with phi(Rtilde) = 1; delta = 1 / (2 log(Rtilde/a)).
struct Normalization {
    bool by_delta = true;
    double value = 0.0;
    static Normalization delta(double d) {
        if (!(d > 0)) throw Error("normalization: delta must be positive");
        return {true, d};
    }
    static Normalization rtilde(double r) {
        if (!(r > 0)) throw Error("normalization: Rtilde must be positive");
        return {false, r};
    }
};

// Scattering solution of an L1 potential: profiles phi0, phi = 2 delta phi0,
// omega = 1 - phi, g = v phi, plus the normalization data.
struct ScatteringSolution {
    PotentialSpec potential;
    RadialSolution raw; // normalized phi0 with r phi0' = 1 outside support

    std::vector<double> grid;
    std::vector<double> phi0;
    std::vector<double> phi;
    std::vector<double> omega;
    std::vector<double> g;

    double a = 0.0;
    double delta = 0.0;
    double rtilde = 0.0;
    double g_integral = 0.0;     // quadrature of v phi over the plane
    double support = 0.0;

    double phi0_at(double r) const { return raw.phi0(r); }
    double phi_at(double r) const { return 2.0 * delta * raw.phi0(r); }
    double omega_at(double r) const { return 1.0 - phi_at(r); }
    double g_at(double r) const {
        double v = potential(r);
        return v == 0.0 ? 0.0 : v * phi_at(r);
    }

    // healing length of Lemma FT-omega: (e^Gamma / 2) Rtilde
    double ell_delta() const { return 0.5 * std::exp(euler_gamma) * rtilde; }
};

inline ScatteringSolution solve_scattering(const PotentialSpec& p,
                                           const Normalization& norm,
                                           const SolverOptions& opt = {}) {
    p.validate();
    if (p.kind == Kind::hard_core)
        throw HardCoreNotL1("hard core is not L1; reduce it first (shell "
                            "construction) or use the analytic special cases");
    if (p.kind == Kind::shell_measure)
        throw HardCoreNotL1("shell measures are handled symbolically, not on a grid");
    if (!p.compactly_supported())
        throw NotIntegrable("solve_scattering needs compact support; truncate first");

    ScatteringSolution sol;
    sol.potential = p;
    sol.raw = detail::shoot(p, opt);
    sol.a = sol.raw.a;
    sol.support = sol.raw.support;
    if (sol.a <= 0.0)
        throw NonConvergence("zero scattering length: scattering solution "
                             "cannot be normalized");
    if (norm.by_delta) {
        sol.delta = norm.value;
        sol.rtilde = sol.a * std::exp(1.0 / (2.0 * sol.delta));
    } else {
        // Rtilde > a is enough to define delta; phi(Rtilde) = 1 holds exactly
        // only when Rtilde also clears the support.
        if (!(norm.value > sol.a))
            throw Error("normalization radius must exceed the scattering length");
        sol.rtilde = norm.value;
        sol.delta = 0.5 / std::log(sol.rtilde / sol.a);
    }

    // sample grid: interior ODE nodes plus a log-spaced exterior up to Rtilde
    for (const auto& n : sol.raw.nodes) {
        sol.grid.push_back(std::exp(n.t));
        sol.phi0.push_back(n.y[0]);
    }
    if (sol.rtilde > sol.support) {
        int next = 64;
        double t0 = std::log(sol.support), t1 = std::log(sol.rtilde);
        for (int i = 1; i <= next; ++i) {
            double r = std::exp(t0 + (t1 - t0) * i / next);
            sol.grid.push_back(r);
            sol.phi0.push_back(std::log(r / sol.a));
        }
    }
    sol.phi.resize(sol.grid.size());
    sol.omega.resize(sol.grid.size());
    sol.g.resize(sol.grid.size());
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        sol.phi[i] = 2.0 * sol.delta * sol.phi0[i];
        sol.omega[i] = 1.0 - sol.phi[i];
        double v = p(sol.grid[i]);
        sol.g[i] = (v == 0.0 || v == inf) ? 0.0 : v * sol.phi[i];
    }

    // integral of g over the plane (should be 8 pi delta)
    double acc = 0.0;
    std::vector<double> cuts = p.discontinuities();
    double prev = sol.raw.r_start;
    for (double c : cuts) {
        if (c <= prev || c > sol.support) continue;
        auto f = [&](double r) { return sol.g_at(r) * r; };
        acc += quad::integrate(f, prev, c, opt.abs_tol * 1e-2, opt.rel_tol * 1e-2).value;
        prev = c;
    }
    sol.g_integral = 2.0 * pi * acc;
    return sol;
}

// Truncation lemma: v_R = v 1_{B(0,R)} together with the certified bound
//   (1/2) int_{|x|>R} v log(|x|/a)^2 dx / log(R/a)^2
// on the drop of 2 pi / log(R/.).
struct TruncationResult {
    PotentialSpec truncated;
    double bound = 0.0;
};

inline TruncationResult truncate_potential(const PotentialSpec& p, double R,
                                           const SolverOptions& opt = {}) {
    p.validate();
    double a = scattering_length(p, opt);
    if (!(R > a)) throw Error("truncate_potential: R must exceed a(p)");
    TruncationResult out;
    out.truncated = p;
    out.truncated.cutoff = std::min(p.cutoff, R);
    if (p.support_radius() <= R) {
        out.bound = 0.0; // empty tail
        return out;
    }
    if (p.kind == Kind::power_law_tail && R >= p.tail_start()) {
        out.bound = detail::power_tail_bound(p, R, a);
        return out;
    }
    // generic tail: quadrature of the log^2-weighted mass
    auto f = [&](double r) {
        return p(r) * std::pow(std::log(r / a), 2) * r;
    };
    double hi = p.support_radius();
    double val;
    if (hi < inf) {
        val = quad::integrate(f, R, hi, opt.abs_tol, opt.rel_tol).value;
    } else {
        val = quad::integrate_to_inf(f, R, R, opt.abs_tol, opt.rel_tol).value;
    }
    out.bound = 0.5 * 2.0 * pi * val / std::pow(std::log(R / a), 2);
    return out;
}

// Large-integral reduction: remove the inner part so the remaining integral
// is at most 4 pi T; reports the certified scattering defect bound.
struct LargeIntegralResult {
    PotentialSpec reduced;
    double r_t = 0.0;          // inner removal radius
    double defect_bound = 0.0; // 2 pi / (log(R/a)^2 T)
};

inline LargeIntegralResult reduce_large_integral(const PotentialSpec& p, double T,
                                                 const SolverOptions& opt = {}) {
    p.validate();
    if (!p.is_l1()) throw HardCoreNotL1("reduce_large_integral needs an L1 potential");
    if (!p.compactly_supported())
        throw NotIntegrable("reduce_large_integral needs compact support");
    if (!(T > 0)) throw Error("reduce_large_integral: T must be positive");
    LargeIntegralResult out;
    out.reduced = p;
    double target = 4.0 * pi * T;
    double total = p.total_integral();
    if (total <= target) {
        out.r_t = 0.0;
    } else {
        // mass_above is continuous and decreasing; bisect
        double lo = 0.0, hi = p.support_radius();
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (p.mass_above(mid) >= target ? lo : hi) = mid;
            if (hi - lo < 1e-15 * p.support_radius()) break;
        }
        out.r_t = 0.5 * (lo + hi);
        out.reduced.inner_cutoff = std::max(p.inner_cutoff, out.r_t);
    }
    double a = scattering_length(p, opt);
    double R = p.support_radius();
    out.defect_bound = 2.0 * pi / (std::pow(std::log(R / a), 2) * T);
    return out;
}

// Spherical-measure replacement: the shell at radius b with outward slope
// 2 f'(b) = 2 / (b log(b/a)), total mass 4 pi / log(b/a). Its scattering
// length equals a(p) and its transform is mass * J0(b p).
inline PotentialSpec shell_potential(const PotentialSpec& p, double b,
                                     const SolverOptions& opt = {}) {
    p.validate();
    if (!(b > p.support_radius()))
        throw BadShellRadius("shell radius must exceed the support radius");
    double a = scattering_length(p, opt);
    if (!(a > 0)) throw Error("shell_potential: base potential has a = 0");
    double mass = 4.0 * pi / std::log(b / a);
    return PotentialSpec::shell(b, mass);
}

// Truncated scattering solution f = min(1, phi0 / log(b/a)); f == 1 for
// r >= b, 0 at a hard core boundary, monotone non-decreasing.
struct TruncatedF {
    double b = 0.0;
    double a = 0.0;
    double log_b_over_a = 0.0;
    double support = 0.0;
    bool hard = false;
    std::shared_ptr<RadialSolution> sol; // empty for the hard-core closed form

    double operator()(double r) const {
        if (r >= b) return 1.0;
        double num;
        if (hard) {
            if (r <= a) return 0.0;
            num = std::log(r / a);
        } else {
            num = sol->phi0(r);
        }
        double f = num / log_b_over_a;
        return f >= 1.0 ? 1.0 : (f < 0.0 ? 0.0 : f);
    }

    RadialProfile sampled(int n = 512) const {
        RadialProfile prof;
        double r0 = hard ? a : sol->r_start;
        double t0 = std::log(r0), t1 = std::log(b);
        prof.grid.resize(n);
        prof.values.resize(n);
        for (int i = 0; i < n; ++i) {
            double r = std::exp(t0 + (t1 - t0) * i / (n - 1));
            prof.grid[i] = r;
            prof.values[i] = (*this)(r);
        }
        return prof;
    }
};

inline TruncatedF truncated_scattering_f(const PotentialSpec& p, double b,
                                         const SolverOptions& opt = {}) {
    p.validate();
    if (!(b > p.support_radius()))
        throw BadShellRadius("truncated_scattering_f: b must exceed the support");
    TruncatedF f;
    f.b = b;
    f.support = p.support_radius();
    if (p.kind == Kind::hard_core) {
        f.hard = true;
        f.a = std::min(p.core_radius, p.cutoff);
    } else {
        f.sol = std::make_shared<RadialSolution>(detail::shoot(p, opt));
        f.a = f.sol->a;
        if (!(f.a > 0)) throw Error("truncated_scattering_f: a = 0");
    }
    f.log_b_over_a = std::log(b / f.a);
    return f;
}

// integral of (1 - f^2) over the plane, plus the constant of the
// b^2/log(b/a) + R^2 envelope
struct OneMinusFsq {
    double value = 0.0;
    double envelope = 0.0; // b^2/log(b/a) + support^2
    double fitted_c = 0.0; // value / envelope
};

inline OneMinusFsq one_minus_f_sq_integral(const PotentialSpec& p, double b,
                                           const SolverOptions& opt = {}) {
    TruncatedF f = truncated_scattering_f(p, b, opt);
    auto integrand = [&](double r) {
        double fr = f(r);
        return (1.0 - fr * fr) * r;
    };
    double acc = 0.0;
    // inner disk where f == 0 (hard core) handled exactly
    double lo = 0.0;
    if (f.hard) {
        acc += 0.5 * f.a * f.a; // int_0^a r dr, f == 0 inside the core
        lo = f.a;
    } else {
        lo = f.sol->r_start;
        double f0 = f(lo);
        acc += (1.0 - f0 * f0) * 0.5 * lo * lo; // f ~ const below the start radius
    }
    std::vector<double> cuts = p.discontinuities();
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double prev = lo;
    for (double c : cuts) {
        if (c <= prev || c > b) continue;
        acc += quad::integrate(integrand, prev, c, opt.abs_tol, opt.rel_tol).value;
        prev = c;
    }
    OneMinusFsq out;
    out.value = 2.0 * pi * acc;
    out.envelope = b * b / f.log_b_over_a + f.support * f.support;
    out.fitted_c = out.value / out.envelope;
    return out;
}

} // namespace bose2d::potentials
