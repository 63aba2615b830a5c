#pragma once

#include <boost/rational.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bose2d/bogoliubov.hpp"
#include "bose2d/constants.hpp"
#include "bose2d/errors.hpp"
#include "bose2d/potentials.hpp"
#include "bose2d/radial_fourier.hpp"

namespace bose2d::energy {

// ---------------------------------------------------------------------------
// Small parameters of the dilute expansion
// ---------------------------------------------------------------------------

struct SmallParameters {
    double y = 0.0;        // |log(rho a^2)|^-1
    double delta0 = 0.0;   // |log(rho a^2 Y)|^-1
    double delta_mu = 0.0; // same formula with rho_mu = rho
    double elldelta = 0.0; // (e^Gamma/2) rho^{-1/2} Y^{-1/2}
};

inline SmallParameters small_parameters(double rho, double a) {
    double x = rho * a * a;
    if (!(x > 0.0) || !(x < std::exp(-1.0)))
        throw DensityTooHigh("small_parameters: need 0 < rho a^2 < 1/e");
    SmallParameters s;
    s.y = 1.0 / std::abs(std::log(x));
    // 1/delta0 = 1/Y + |log Y|, exact and cancellation-free
    s.delta0 = 1.0 / (1.0 / s.y + std::log(1.0 / s.y));
    s.delta_mu = s.delta0;
    s.elldelta = 0.5 * std::exp(euler_gamma) / std::sqrt(rho * s.y);
    // standing assumption: Y/2 <= delta0 <= 2Y holds for every Y < 1
    if (!(s.delta0 >= 0.5 * s.y && s.delta0 <= 2.0 * s.y))
        throw Error("small_parameters: delta0 left [Y/2, 2Y]");
    return s;
}

// ---------------------------------------------------------------------------
// LHY energy forms
// ---------------------------------------------------------------------------

struct EnergyReport {
    double rho = 0.0, a = 0.0;
    double y = 0.0, delta0 = 0.0;
    double leading = 0.0;         // 4 pi rho^2 delta0
    double second_order = 0.0;    // 4 pi rho^2 delta0^2 (2 Gamma + 1/2 + log pi)
    double delta0_form = 0.0;     // leading + second_order
    double three_term_form = 0.0; // 4 pi rho^2 Y (1 - Y|log Y| + (const) Y)
    double form_difference = 0.0; // delta0_form - three_term_form, o(rho^2 Y^2)
    double bracket_upper = 0.0;   // delta0_form + rho^2 delta0^3 |log delta0|
    double bracket_lower = 0.0;   // delta0_form - rho^2 delta0^3 |log delta0|
    double eta_fit = std::numeric_limits<double>::quiet_NaN(); // set by sweeps
};

inline EnergyReport lhy_energy(double rho, double a) {
    auto s = small_parameters(rho, a);
    EnergyReport r;
    r.rho = rho;
    r.a = a;
    r.y = s.y;
    r.delta0 = s.delta0;
    r.leading = 4.0 * pi * rho * rho * s.delta0;
    r.second_order = r.leading * lhy_constant * s.delta0;
    r.delta0_form = r.leading + r.second_order;
    double ylog = s.y * std::log(1.0 / s.y);
    r.three_term_form =
        4.0 * pi * rho * rho * s.y * (1.0 - ylog + lhy_constant * s.y);
    r.form_difference = r.delta0_form - r.three_term_form;
    double band = rho * rho * std::pow(s.delta0, 3) * std::abs(std::log(s.delta0));
    r.bracket_upper = r.delta0_form + band;
    r.bracket_lower = r.delta0_form - band;
    return r;
}

// ---------------------------------------------------------------------------
// Quasi-free upper-bound functional
// ---------------------------------------------------------------------------

struct QuasifreeReport {
    double rho = 0.0, a = 0.0, y = 0.0, delta = 0.0;
    double vhat0 = 0.0;   // potential's zero mode
    double ghat0 = 0.0;   // 8 pi delta
    double i0 = 0.0;      // Bogoliubov integral I_0(k^2, ghat)
    double main_value = 0.0; // rho^2 ghat0 / 2 + i0
    // remainder groups; the first two carry the explicit 1/2, the last two the
    // proof's unknown constants, reported at c = 1
    double r_absx = 0.0;  // (1/2) rho^2 delta^2 vhat0 |X|
    double r_x2 = 0.0;    // (1/2) rho^2 delta^2 vhat0 X^2
    double r_vg = 0.0;    // c1 rho^2 delta (vhat0 - ghat0)
    double r_g2 = 0.0;    // c2 vhat0 rho^2 ghat0^2
    double c1 = 1.0, c2 = 1.0;
    double total_bound = 0.0;
    double x_factor = 0.0; // X = 1/delta - 1/Y + log delta
};

inline QuasifreeReport quasifree_upper_energy(const potentials::PotentialSpec& p,
                                              double rho, double delta,
                                              const potentials::SolverOptions& opt = {},
                                              double quad_rel = 1e-9) {
    using potentials::Kind;
    QuasifreeReport rep;
    rep.rho = rho;
    rep.delta = delta;
    rep.a = potentials::scattering_length(p, opt);
    if (!(rep.a > 0)) throw Error("quasifree_upper_energy: potential has a = 0");
    auto sp = small_parameters(rho, rep.a);
    rep.y = sp.y;
    if (!(delta >= 0.5 * rep.y && delta <= 2.0 * rep.y))
        throw Error("quasifree_upper_energy: delta outside [Y/2, 2Y]");
    rep.ghat0 = 8.0 * pi * delta;
    double rtilde = rep.a * std::exp(1.0 / (2.0 * delta));
    double elldelta = 0.5 * std::exp(euler_gamma) * rtilde;

    bog::BogIntegrand spec;
    spec.rho = rho;
    spec.epsilon = 0.0;
    spec.elldelta = elldelta;
    spec.w0 = rep.ghat0;
    spec.sub0 = rep.ghat0;

    if (p.kind == Kind::shell_measure) {
        rep.vhat0 = p.shell_mass;
        double b = p.shell_radius;
        double g0 = rep.ghat0;
        spec.w = [g0, b](double k) { return g0 * bessel::j0(b * k); };
        spec.sub = spec.w;
        spec.sub_minus_sub0 = [g0, b](double k) {
            double x = b * k;
            if (x < 1e-3) return g0 * (-x * x / 4.0 + x * x * x * x / 64.0);
            return g0 * (bessel::j0(x) - 1.0);
        };
        spec.osc_radius = b;
    } else if (p.is_l1()) {
        rep.vhat0 = p.total_integral();
        // the evaluator holds a pointer into the solution: keep both alive
        // inside the closures
        auto solp = std::make_shared<potentials::ScatteringSolution>(
            potentials::solve_scattering(p, potentials::Normalization::delta(delta), opt));
        auto ghat = std::make_shared<fourier::GhatEvaluator>(*solp, 1e-11, 3e-10);
        spec.w = [ghat, solp](double k) { return (*ghat)(k); };
        spec.sub = spec.w;
        spec.sub_minus_sub0 = [ghat](double k) { return ghat->minus_at0(k); };
        // keep the subtraction pair internally consistent: use the evaluator's
        // own zero value, not the exact 8 pi delta it approximates
        spec.w0 = ghat->at_zero();
        spec.sub0 = ghat->at_zero();
        spec.osc_radius = solp->support;
    } else {
        throw NotIntegrable("quasifree_upper_energy: potential has no finite "
                            "zero mode; reduce it to a shell first");
    }

    rep.i0 = bog::bog_energy_integral(spec, quad_rel).value;
    rep.main_value = 0.5 * rho * rho * rep.ghat0 + rep.i0;

    double x = 1.0 / delta - 1.0 / rep.y + std::log(delta);
    rep.x_factor = x;
    double d2v = rho * rho * delta * delta * rep.vhat0;
    rep.r_absx = 0.5 * d2v * std::abs(x);
    rep.r_x2 = 0.5 * d2v * x * x;
    rep.r_vg = rep.c1 * rho * rho * delta * (rep.vhat0 - rep.ghat0);
    rep.r_g2 = rep.c2 * rep.vhat0 * rho * rho * rep.ghat0 * rep.ghat0;
    rep.total_bound = rep.main_value + rep.r_absx + rep.r_x2 + rep.r_vg + rep.r_g2;
    return rep;
}

// ---------------------------------------------------------------------------
// Optimization of the normalization parameter delta
// ---------------------------------------------------------------------------

template <class F>
inline double minimize_golden(const F& f, double lo, double hi, double rel_tol = 1e-10) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - (b - a) * invphi;
    double d = a + (b - a) * invphi;
    double fc = f(c), fd = f(d);
    while (b - a > rel_tol * (std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct DeltaCurvePoint {
    double delta = 0.0;
    double value = 0.0;
};

struct DeltaOptimizeResult {
    double delta_star = 0.0;
    double y = 0.0;
    double delta0 = 0.0;
    double ratio_vs_y = 0.0;      // (delta* - Y) / (Y^2 |log Y|)
    double dist_to_delta0 = 0.0;  // |delta* - delta0| / (Y^2 |log Y|)
    std::vector<DeltaCurvePoint> curve;
};

// upper-bound objective in delta, with the closed-form Bogoliubov integral
// standing in for I_0 (the ghat -> ghat0 replacement error is subleading)
inline double upper_bound_objective(double rho, double a, double vhat0, double y,
                                    double delta) {
    double ghat0 = 8.0 * pi * delta;
    double rtilde = a * std::exp(1.0 / (2.0 * delta));
    double elldelta = 0.5 * std::exp(euler_gamma) * rtilde;
    double i0 = bog::bog_integral_closed_form(rho, ghat0, 0.0, elldelta);
    double x = 1.0 / delta - 1.0 / y + std::log(delta);
    double d2v = rho * rho * delta * delta * vhat0;
    return 0.5 * rho * rho * ghat0 + i0 + 0.5 * d2v * std::abs(x) + 0.5 * d2v * x * x +
           rho * rho * delta * (vhat0 - ghat0) + vhat0 * rho * rho * ghat0 * ghat0;
}

inline DeltaOptimizeResult delta_optimize(const potentials::PotentialSpec& p,
                                          double rho,
                                          const potentials::SolverOptions& opt = {},
                                          int curve_points = 33) {
    double a = potentials::scattering_length(p, opt);
    auto sp = small_parameters(rho, a);
    double vhat0 = (p.kind == potentials::Kind::shell_measure) ? p.shell_mass
                                                               : p.total_integral();
    auto f = [&](double d) { return upper_bound_objective(rho, a, vhat0, sp.y, d); };
    DeltaOptimizeResult out;
    out.y = sp.y;
    out.delta0 = sp.delta0;
    out.delta_star = minimize_golden(f, 0.5 * sp.y, 2.0 * sp.y, 1e-12);
    double scale = sp.y * sp.y * std::log(1.0 / sp.y);
    out.ratio_vs_y = (out.delta_star - sp.y) / scale;
    out.dist_to_delta0 = std::abs(out.delta_star - sp.delta0) / scale;
    out.curve.resize(curve_points);
    for (int i = 0; i < curve_points; ++i) {
        double d = 0.5 * sp.y + 1.5 * sp.y * i / (curve_points - 1);
        out.curve[i] = {d, f(d)};
    }
    return out;
}

// ---------------------------------------------------------------------------
// The exact-rational parameter ledger
// ---------------------------------------------------------------------------

using Rational = boost::rational<long long>;

struct ExponentRelation {
    std::string tag;  // paper-style tag of the relation
    std::string lhs;  // formal monomial, human readable
    std::string rhs;
    Rational lhs_exp{0};
    Rational rhs_exp{0};
    // much_less:   lhs << rhs, i.e. lhs_exp >  rhs_exp for Y < 1
    // much_greater:lhs >> rhs, i.e. lhs_exp <  rhs_exp
    // leq:         lhs <= C rhs, i.e. lhs_exp >= rhs_exp
    // bounded:     lhs <= C,     i.e. lhs_exp >= 0
    enum class Kind { much_less, much_greater, leq, bounded } kind = Kind::much_less;
    bool log_flagged = false; // |log Y| factors treated as exponent-neutral
    bool pass = false;

    void judge() {
        switch (kind) {
            case Kind::much_less: pass = lhs_exp > rhs_exp; break;
            case Kind::much_greater: pass = lhs_exp < rhs_exp; break;
            case Kind::leq: pass = lhs_exp >= rhs_exp; break;
            case Kind::bounded: pass = lhs_exp >= Rational(0); break;
        }
    }
};

// Exponents of the explicit (non-optimal) parameter choice as powers of Y.
// M = 258 is a plain integer, not a Y power.
namespace ledger_detail {
inline constexpr long long kM = 258;
inline const Rational exp_calm{-31, 32};       // script M
inline const Rational exp_eps_t{15, 8192};     // Y^{1/512 - 1/8192}
inline const Rational exp_k_ell{-1, 2048};
inline const Rational exp_k_h{-1, 128};
inline const Rational exp_k_ht{-1, 64};        // K~_H
inline const Rational exp_d{1, 512};
inline const Rational exp_k_n{-1, 512};
inline const Rational exp_s{1, 4096};
inline const Rational exp_k_b{-1, 512};
inline const Rational exp_eps_k{1, 512};
inline const Rational exp_eps_m{33, 1024};     // Y^{1/32 + 1/1024}
inline const Rational exp_eps_n{513, 512};     // K_N^{-1} Y
inline const Rational exp_eps_r{1, 64};        // our choice; the paper's list omits it
inline const Rational exp_v1{-1, 8};           // ceiling on ||v||_1
} // namespace ledger_detail

inline std::vector<ExponentRelation> parameter_ledger() {
    using namespace ledger_detail;
    using K = ExponentRelation::Kind;
    std::vector<ExponentRelation> rel;
    auto add = [&](std::string tag, std::string lhs, Rational le, K kind,
                   std::string rhs, Rational re, bool logf = false) {
        ExponentRelation r;
        r.tag = std::move(tag);
        r.lhs = std::move(lhs);
        r.rhs = std::move(rhs);
        r.lhs_exp = le;
        r.rhs_exp = re;
        r.kind = kind;
        r.log_flagged = logf;
        r.judge();
        rel.push_back(std::move(r));
    };
    const Rational zero{0};

    add("eq:d^-2<<Kl.a", "d", exp_d, K::much_less, "1", zero);
    add("eq:d^-2<<Kl.b", "1", zero, K::much_less, "K_l", exp_k_ell);
    add("eq:rel_d_k_H.a", "d^-2", -2 * exp_d, K::much_less, "K_H", exp_k_h);
    add("eq:rel_d_k_H.b", "K_H", exp_k_h, K::much_less, "K~_H", exp_k_ht);
    add("eq:rel_s_Kl.a", "d", exp_d, K::much_less, "(s K_l)^-1", -(exp_s + exp_k_ell));
    add("eq:rel_s_Kl.b", "(s K_l)^-1", -(exp_s + exp_k_ell), K::much_less, "1", zero);
    add("eq:rel_T2comm.a", "d^2 K_l^4", 2 * exp_d + 4 * exp_k_ell, K::much_less,
        "eps_T", exp_eps_t);
    add("eq:rel_T2comm.b", "eps_T", exp_eps_t, K::much_less, "d s K_l",
        exp_d + exp_s + exp_k_ell);
    add("small_box(d s^-1 <= C)", "d s^-1", exp_d - exp_s, K::bounded, "C", zero);
    add("eq:rel_Kl_KH_d.a", "K_l", exp_k_ell, K::much_less, "K_l^2", 2 * exp_k_ell);
    add("eq:rel_Kl_KH_d.b", "K_l^2", 2 * exp_k_ell, K::much_less, "s d^-1",
        exp_s - exp_d);
    add("eq:rel_Kl_KH_d.c", "s d^-1", exp_s - exp_d, K::much_less, "d^-1", -exp_d);
    add("eq:rel_Kl_KH_d.d", "d^-1", -exp_d, K::much_less, "d^-2", -2 * exp_d);
    add("eq:rel_Kl_KH_d.e", "d^-2", -2 * exp_d, K::much_less, "K_H", exp_k_h);
    add("eq:K_Bsmallbox", "(d s K_l)^-1", -(exp_d + exp_s + exp_k_ell), K::much_less,
        "K_B", exp_k_b);
    add("eq:relK_B-K_H-K_N-K_L", "K_B K_l K~_H K_N^{1/4}",
        exp_k_b + exp_k_ell + exp_k_ht + exp_k_n / 4, K::much_less, "Y^{-1/4}",
        Rational(-1, 4));
    add("eq:Kl_KN", "K_l^-1 K_N^{1/4}", -exp_k_ell + exp_k_n / 4, K::much_less,
        "Y^{-1/2}", Rational(-1, 2));
    add("eq:rel_KH_KN", "K~_H K_N^{-1/4}", exp_k_ht - exp_k_n / 4, K::much_greater,
        "Y^{1/4}", Rational(1, 4));
    add("cond:3Qloc", "K_l^2 K_H^2 M", 2 * exp_k_ell + 2 * exp_k_h + exp_calm,
        K::much_less, "Y^-1", Rational(-1));
    add("eq:Kl_KN_number", "K_B^2 K_l^2", 2 * exp_k_b + 2 * exp_k_ell, K::much_less,
        "Y^{-1/4}", Rational(-1, 4));
    add("eq:rel_errQ3_statement", "K_l^10 K_H^-8 d^-4",
        10 * exp_k_ell - 8 * exp_k_h - 4 * exp_d, K::much_less, "Y^-1", Rational(-1));
    add("eq:rel_epsR_Kl_KB", "eps_R", exp_eps_r, K::much_less,
        "K_B^-2 K_l^-2 |log Y|^-1", -2 * exp_k_b - 2 * exp_k_ell, true);
    add("eq:rel_T2comm2", "eps_K", exp_eps_k, K::much_less, "K_l^-2", -2 * exp_k_ell);
    {
        // additive right side: the dominant term carries the smaller exponent
        Rational t1 = -2 * exp_d + exp_eps_m / 2;
        Rational t2 = -4 * exp_d + exp_eps_m;
        Rational dom = std::min(t1, t2);
        add("eq:rel_epsK_KM2", "eps_K", exp_eps_k, K::much_greater,
            "K_l^4 K_H^-4 (d^-2 eps_M^{1/2} + d^-4 eps_M)",
            4 * exp_k_ell - 4 * exp_k_h + dom);
    }
    add("eq:rel_epsT_d_Kl", "eps_M", exp_eps_m, K::much_less, "d^8 K_l^4 eps_T^-2",
        8 * exp_d + 4 * exp_k_ell - 2 * exp_eps_t);
    add("eq:rel_eps_M_small", "eps_N", exp_eps_n, K::leq, "eps_T^-2 d^4 K_l^4",
        -2 * exp_eps_t + 4 * exp_d + 4 * exp_k_ell);
    add("eq:M_large_matrices", "M",
        exp_calm, K::much_greater,
        "Y^{-7/8} |log Y|^{1/4} K_B^{1/2} K_l^{1/2} K_N^{1/8} K~_H^{1/2} ||v||_1^{1/2}",
        Rational(-7, 8) + exp_k_b / 2 + exp_k_ell / 2 + exp_k_n / 8 + exp_k_ht / 2 +
            exp_v1 / 2,
        true);
    add("eq:rel_locQ3low", "d^{2M-2}", (2 * kM - 2) * exp_d, K::much_less, "Y",
        Rational(1));
    add("eq:rel_locQ3low2", "d^2 K_l^4", 2 * exp_d + 4 * exp_k_ell, K::much_less,
        "eps_T", exp_eps_t);
    add("eq:rel_KH_K_M.a", "eps_N^{3/2}", exp_eps_n * 3 / 2, K::leq, "eps_M",
        exp_eps_m);
    add("eq:rel_KH_K_M.b", "(K_H/K~_H)^M", kM * (exp_k_h - exp_k_ht), K::leq,
        "eps_M", exp_eps_m);
    add("eq:rel_KH_K_M.c", "(d^2 K_H)^{-2M}", -2 * kM * (2 * exp_d + exp_k_h),
        K::leq, "eps_M", exp_eps_m);
    {
        Rational t1 = -2 * exp_s;
        Rational t2 = -2 * exp_d;
        Rational dom = std::min(t1, t2);
        add("eq:condition_small_loc", "(s^-2 + d^-2)(s d)^-2 s^M",
            dom - 2 * (exp_s + exp_d) + kM * exp_s, K::bounded, "C", zero);
    }
    return rel;
}

// throws RelationViolated naming the first failing tag; returns the ledger
inline std::vector<ExponentRelation> verify_ledger() {
    auto rel = parameter_ledger();
    for (const auto& r : rel)
        if (!r.pass)
            throw RelationViolated("parameter ledger: relation " + r.tag + " fails");
    return rel;
}

} // namespace bose2d::energy
