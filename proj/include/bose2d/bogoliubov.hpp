#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "bose2d/bessel.hpp"
#include "bose2d/constants.hpp"
#include "bose2d/errors.hpp"
#include "bose2d/parallel.hpp"
#include "bose2d/quadrature.hpp"

namespace bose2d::bog {

// ---------------------------------------------------------------------------
// Pairing coefficients of the quasi-free state
// ---------------------------------------------------------------------------

struct BogoliubovCoefficients {
    double p = 0.0;
    double rho0_ghat = 0.0; // t = rho0 * ghat_p
    double alpha = 0.0;
    double gamma = 0.0;
};

// alpha_p = -t / (2E), gamma_p = (p^2 + t - E) / (2E) with E = sqrt(p^4 + 2 t p^2).
// gamma is evaluated as t^2 / (2E (p^2 + t + E)), which is exact algebra and
// free of cancellation; alpha^2 = gamma (gamma + 1) then holds to rounding.
// ghat_p may be negative (oscillating transforms) as long as p^2 + 2 t >= 0.
inline BogoliubovCoefficients bog_coefficients(double p, double rho0, double ghat_p) {
    if (!(p > 0.0)) throw ZeroMomentum("bog_coefficients: p must be positive");
    double t = rho0 * ghat_p;
    if (p * p + 2.0 * t < 0.0)
        throw Unstable("bog_coefficients: p^2 + 2 rho0 ghat_p < 0");
    BogoliubovCoefficients c;
    c.p = p;
    c.rho0_ghat = t;
    if (t == 0.0) return c; // free mode
    double e = p * std::sqrt(p * p + 2.0 * t);
    c.alpha = -t / (2.0 * e);
    c.gamma = t * t / (2.0 * e * (p * p + t + e));
    return c;
}

// ---------------------------------------------------------------------------
// Lattice sums of |alpha_p| and gamma_p over (2 pi / L) Z^2 minus the origin
// ---------------------------------------------------------------------------

struct CoefficientSums {
    double sum_abs_alpha = 0.0;
    double sum_gamma = 0.0;
    double n_particles = 0.0; // rho L^2 (with rho = rho0 here)
    double c_alpha = 0.0;     // sum|alpha| / N
    double c_gamma = 0.0;     // sum gamma / (N delta)
    double p_max = 0.0;
    double alpha_tail_estimate = 0.0; // envelope bound on the truncated part
};

// ghat must be radial; osc_radius > 0 enables the J0 envelope
// ghat0 / sqrt(osc_radius p) in the tail estimate.
inline CoefficientSums coefficient_sums(double box_l, double rho0,
                                        const std::function<double(double)>& ghat,
                                        double ghat0, double delta, double p_max,
                                        double osc_radius = 0.0) {
    if (!(box_l > 0) || !(p_max > 0)) throw Error("coefficient_sums: bad arguments");
    double dp = 2.0 * pi / box_l;
    std::int64_t n = static_cast<std::int64_t>(p_max / dp);
    // octant reduction: j < i counts 8x, diagonal and axes 4x;
    // two passes keep the reduction simple and deterministic
    double sum_alpha = parallel_sum(static_cast<std::size_t>(n), [&](std::size_t ii) {
        std::int64_t i = static_cast<std::int64_t>(ii) + 1;
        double acc = 0.0;
        for (std::int64_t j = 0; j <= i; ++j) {
            double p = dp * std::sqrt(double(i * i + j * j));
            if (p > p_max) break;
            double mult = (j == 0 || j == i) ? 4.0 : 8.0;
            acc += mult * std::abs(bog_coefficients(p, rho0, ghat(p)).alpha);
        }
        return acc;
    }, 4);
    double sum_gamma = parallel_sum(static_cast<std::size_t>(n), [&](std::size_t ii) {
        std::int64_t i = static_cast<std::int64_t>(ii) + 1;
        double acc = 0.0;
        for (std::int64_t j = 0; j <= i; ++j) {
            double p = dp * std::sqrt(double(i * i + j * j));
            if (p > p_max) break;
            double mult = (j == 0 || j == i) ? 4.0 : 8.0;
            acc += mult * bog_coefficients(p, rho0, ghat(p)).gamma;
        }
        return acc;
    }, 4);

    CoefficientSums out;
    out.sum_abs_alpha = sum_alpha;
    out.sum_gamma = sum_gamma;
    out.n_particles = rho0 * box_l * box_l;
    out.p_max = p_max;
    out.c_alpha = sum_alpha / out.n_particles;
    out.c_gamma = sum_gamma / (out.n_particles * delta);
    // |alpha_p| <= rho0 |ghat_p| / (2 p^2); integrate the envelope beyond p_max
    if (osc_radius > 0.0 && p_max * osc_radius >= 1.0) {
        out.alpha_tail_estimate = (box_l * box_l / (2.0 * pi)) * rho0 * ghat0 /
                                  std::sqrt(osc_radius * p_max);
    } else {
        out.alpha_tail_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Single-mode diagonalization of A (a+^ a+ + a-^ a-) + B (a+^ a-^ + a+ a-)
//                                + kappa (a+^ + a-) + conj(kappa) (a+ + a-^)
// ---------------------------------------------------------------------------

struct BogoliubovMode {
    double a = 0.0;              // A
    double b = 0.0;              // B
    std::complex<double> kappa;  // linear coefficient
    double root = 0.0;           // sqrt(A^2 - B^2)
    double d = 0.0;              // dispersion (A + root)/2
    double alpha = 0.0;          // B / (A + root) = (A - root)/B
    std::complex<double> c0;     // displacement 2 conj(kappa)/(A + B + root)
    double shift = 0.0;          // ground-state constant under canonical commutators
    bool degenerate = false;     // B == A branch
};

inline BogoliubovMode diagonalize_mode(double a, double b,
                                       std::complex<double> kappa) {
    if (!(a > 0.0)) throw Unstable("diagonalize_mode: need A > 0");
    BogoliubovMode m;
    m.a = a;
    m.b = b;
    m.kappa = kappa;
    if (b == a) {
        m.degenerate = true;
        m.root = 0.0;
        m.alpha = 1.0;
    } else if (std::abs(b) < a) {
        m.root = std::sqrt((a - b) * (a + b));
        m.alpha = b / (a + m.root);
    } else {
        throw Unstable("diagonalize_mode: |B| > A has no ground state");
    }
    m.d = 0.5 * (a + m.root);
    m.c0 = 2.0 * std::conj(kappa) / (a + b + m.root);
    // -(A - sqrt(A^2-B^2)) - 2 |kappa|^2 / (A + B); A - root = B^2/(A + root)
    double a_minus_root = (b == 0.0) ? 0.0 : b * b / (a + m.root);
    m.shift = -a_minus_root - 2.0 * std::norm(kappa) / (a + b);
    return m;
}

// ---------------------------------------------------------------------------
// tau kernel and the Appendix-style parameter bundle
// ---------------------------------------------------------------------------

struct TauParams {
    double eps_t = 0.0;
    double s = 1.0;
    double d = 1.0;
    double ell = 1.0;
};

// explicit choice: eps_T = Y^{15/8192}, s = Y^{1/4096}, d = Y^{1/512},
// ell = K_ell rho^{-1/2} Y^{-1/2} with K_ell = Y^{-1/2048}
inline TauParams tau_params_explicit_choice(double y, double rho) {
    TauParams t;
    t.eps_t = std::pow(y, 15.0 / 8192.0);
    t.s = std::pow(y, 1.0 / 4096.0);
    t.d = std::pow(y, 1.0 / 512.0);
    t.ell = std::pow(y, -1.0 / 2048.0) / std::sqrt(rho * y);
    return t;
}

// tau(k) = (1 - eps_T)[|k| - 1/(2 s ell)]_+^2 + eps_T [|k| - 1/(2 d s ell)]_+^2
inline double tau_kernel(double k, const TauParams& t) {
    auto plus = [](double x) { return x > 0.0 ? x : 0.0; };
    double k1 = plus(std::abs(k) - 0.5 / (t.s * t.ell));
    double k2 = plus(std::abs(k) - 0.5 / (t.d * t.s * t.ell));
    return (1.0 - t.eps_t) * k1 * k1 + t.eps_t * k2 * k2;
}

// ---------------------------------------------------------------------------
// The Bogoliubov energy integral
//   I_eps(kernel, w) = 1/(2 (2pi)^2) int ( sqrt((1-e)^2 a^2 + 2 (1-e) rho a w)
//       - (1-e) a - rho w + rho^2 (ghat^2 - ghat0^2 1_{k <= 1/elldelta})/(2 k^2) ) dk
// ---------------------------------------------------------------------------

struct BogIntegrand {
    std::function<double(double)> kernel;  // a(k); k^2 when empty
    std::function<double(double)> w;       // beta(k)
    std::function<double(double)> sub;     // subtraction profile; defaults to w
    // stable evaluation of sub(k) - sub(0); without it the difference is formed
    // directly, which near k = 0 turns quadrature noise into a fake 1/k^2 term
    std::function<double(double)> sub_minus_sub0;
    double sub0 = 0.0;                     // sub(0)
    double rho = 0.0;
    double epsilon = 0.0;
    double elldelta = 0.0;
    double w0 = 0.0;          // w(0), sets the k scale sqrt(rho w0)
    double osc_radius = 0.0;  // J0 oscillation radius of w, 0 if none
    std::vector<double> extra_cuts; // kernel kinks etc.
};

namespace detail {

// integrand value at k > 0, stable against large-k cancellation:
//   sqrt(X) - (1-e) a - rho w = -rho^2 w^2 / (sqrt(X) + (1-e) a + rho w)
inline double bog_f(const BogIntegrand& s, double k) {
    double a = s.kernel ? s.kernel(k) : k * k;
    double w = s.w(k);
    double one = 1.0 - s.epsilon;
    double x = one * a * (one * a + 2.0 * s.rho * w);
    if (x < 0.0)
        throw Error("bog integrand: (1-e)a + 2 rho w < 0 at k=" + std::to_string(k));
    double denom = std::sqrt(x) + one * a + s.rho * w;
    double head = (denom > 0.0) ? -s.rho * s.rho * w * w / denom : -s.rho * w;
    double gs = s.sub ? s.sub(k) : w;
    double g0 = s.sub ? s.sub0 : s.w0;
    double subtraction;
    if (k <= 1.0 / s.elldelta) {
        double dm = s.sub_minus_sub0 ? s.sub_minus_sub0(k) : gs - g0;
        subtraction = s.rho * s.rho * dm * (gs + g0) / (2.0 * k * k);
    } else {
        subtraction = s.rho * s.rho * gs * gs / (2.0 * k * k);
    }
    return head + subtraction;
}

} // namespace detail

// adaptive radial quadrature of I_eps with the k^-4 analytic tail closure
inline quad::Result bog_energy_integral(const BogIntegrand& spec,
                                        double rel_tol = 1e-9,
                                        double k_factor = 1e3) {
    if (!(spec.rho > 0) || !(spec.w0 > 0) || !(spec.elldelta > 0))
        throw Error("bog_energy_integral: rho, w0, elldelta must be positive");
    if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0))
        throw Error("bog_energy_integral: epsilon must be in [0,1)");
    double s0 = std::sqrt(spec.rho * spec.w0);
    double cut = 1.0 / spec.elldelta;
    double k_max = k_factor * s0;
    double scale = spec.rho * spec.w0;
    scale = scale * scale / (4.0 * pi);
    double abs_tol = rel_tol * scale;

    auto f = [&](double k) { return detail::bog_f(spec, k) * k; };

    std::vector<double> cuts{cut, 0.25 * s0, s0, 4.0 * s0};
    for (double c : spec.extra_cuts) cuts.push_back(c);
    if (spec.osc_radius > 0.0 && k_max * spec.osc_radius > bessel::j0_zero(1)) {
        const auto& zeros = bessel::j0_zeros_upto(k_max * spec.osc_radius);
        for (double z : zeros) {
            double k = z / spec.osc_radius;
            if (k < k_max) cuts.push_back(k);
        }
    }
    double lo_seg = 4.0 * s0;
    while (lo_seg < k_max) {
        cuts.push_back(lo_seg);
        lo_seg *= 2.0;
    }
    cuts.push_back(k_max);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0, err = 0.0;
    double lo = 1e-7 * s0; // the integrand vanishes linearly at k = 0
    for (double c : cuts) {
        if (c <= lo || c > k_max) continue;
        auto r = quad::integrate(f, lo, c, 0.02 * abs_tol, 0.02 * rel_tol);
        total += r.value;
        err += r.error;
        lo = c;
    }
    // analytic tail past k_max from the k^-4 asymptotics, evaluated with the
    // local w so that decaying profiles are not overcorrected
    double w_end = spec.w(k_max);
    double tail = std::pow(spec.rho, 3) * w_end * w_end * spec.w0 /
                  (4.0 * k_max * k_max);
    total += tail;
    err += std::abs(tail);

    quad::Result out;
    out.value = total / (4.0 * pi); // 1/(2 (2pi)^2) * 2 pi
    out.error = err / (4.0 * pi);
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

// J(c0) = 2 pi int_0^inf ( sqrt(q^4+2q^2) - q^2 - 1 + 1_{q>c0}/(2q^2) ) q dq
inline double dimensionless_j_closed(double c0) {
    return 2.0 * pi * (0.125 - 0.25 * log_two + 0.5 * std::log(1.0 / c0));
}

// independent quadrature of the same dimensionless integral
inline double dimensionless_j_quadrature(double c0, double rel_tol = 1e-11) {
    auto f = [&](double q) {
        double s = q * std::sqrt(q * q + 2.0);
        // s - q^2 - 1 = -(q^2 + 1 - s) ; q^2 + 1 - s = 1/(q^2 + 1 + s) exactly:
        // (q^2+1)^2 - s^2 = q^4 + 2q^2 + 1 - q^4 - 2q^2 = 1
        double head = -1.0 / (q * q + 1.0 + s);
        double sub = (q > c0) ? 1.0 / (2.0 * q * q) : 0.0;
        return (head + sub) * q;
    };
    double a_end = 100.0;
    std::vector<double> cuts{std::min(c0, a_end), 1.0, 3.0, 10.0, 30.0, a_end};
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0, lo = 0.0;
    for (double c : cuts) {
        if (c <= lo || c > a_end) continue;
        total += quad::integrate(f, lo, c, 1e-13, rel_tol * 0.1).value;
        lo = c;
    }
    // analytic remainder: integrand*q = 1/(2q^3) - 5/(8 q^5) + O(q^-7)
    total += 0.25 / (a_end * a_end) - 5.0 / (32.0 * std::pow(a_end, 4));
    return 2.0 * pi * total;
}

// paper closed form I_eps(k^2, w0 const) in the q-space convention:
//   (rho w0)^2 / (4 pi (1-eps)) (1/8 - log2/4 + log(1/c0)/2),
//   c0 = sqrt(1-eps) / (elldelta sqrt(rho w0))
inline double bog_integral_closed_form(double rho, double w0, double epsilon,
                                       double elldelta) {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw Error("bog_integral_closed_form: epsilon must be in [0,1)");
    double c0 = std::sqrt(1.0 - epsilon) / (elldelta * std::sqrt(rho * w0));
    double t = rho * w0;
    return t * t / (4.0 * pi * (1.0 - epsilon)) *
           (0.125 - 0.25 * log_two + 0.5 * std::log(1.0 / c0));
}

// the same value by quadrature of the dimensionless q-space integral
inline double bog_integral_constant_w_quadrature(double rho, double w0,
                                                 double epsilon, double elldelta) {
    double c0 = std::sqrt(1.0 - epsilon) / (elldelta * std::sqrt(rho * w0));
    double t = rho * w0;
    return t * t / (8.0 * pi * pi * (1.0 - epsilon)) * dimensionless_j_quadrature(c0);
}

// LHY-form rewriting: with w0 = 8 pi delta and the healing-length cutoff,
// I_0(k^2, w0) = 4 pi rho^2 delta^2 (1/delta - 1/Y + log delta + 1/2 + 2 Gamma + log pi)
inline double bog_integral_lhy_form(double rho, double delta, double y) {
    double x = 1.0 / delta - 1.0 / y + std::log(delta);
    return 4.0 * pi * rho * rho * delta * delta * (x + lhy_constant);
}

// ---------------------------------------------------------------------------
// General Bogoliubov integral bound (hypothesis-checked)
// ---------------------------------------------------------------------------

struct BoundCheckParams {
    double kappa_curv = 1.0; // curvature kappa in A(k) >= kappa [|k|-K]_+^2 + 2 K1 delta
    double big_k = 0.0;      // K
    double k1 = 0.0;         // K1
    double k2 = 0.0;         // K2
    double r_support = 0.0;  // R
    double elldelta = 0.0;
    double delta = 0.0;
    double k_max = 0.0;      // hypothesis grid / quadrature extent
    int grid_n = 4096;
};

struct BoundCheckReport {
    double lhs = 0.0;         // int (A - sqrt(A^2 - B^2)) over R^2
    double rhs_main = 0.0;    // kappa^-1 int (B^2 - B0^2 1)/(2k^2)
    double err_k2 = 0.0;      // (K2^2/K1) delta K^2
    double err_d2 = 0.0;      // kappa^-1 K2^2 delta^2 (1 + R^2/elldelta^2)
    double err_log = 0.0;     // kappa^-1 K2^2 delta^2 |log(2 K elldelta)|
    double err_min = 0.0;     // min(K2^4 delta^4 kappa^-3 K^-4, ...)
    double fitted_c = 0.0;    // smallest C with lhs <= rhs_main + C (errors)
    bool finite = true;
};

inline BoundCheckReport bog_integral_bound_check(
    const std::function<double(double)>& a_fn,
    const std::function<double(double)>& b_fn, const BoundCheckParams& prm) {
    if (!(prm.k_max > 0) || !(prm.elldelta > 0) || !(prm.delta > 0))
        throw Error("bog_integral_bound_check: bad parameters");
    if (!(prm.elldelta * prm.big_k > 1.0))
        throw Error("bog_integral_bound_check: need K > 1/elldelta");
    // hypothesis scan
    for (int i = 1; i <= prm.grid_n; ++i) {
        double k = prm.k_max * i / prm.grid_n;
        double a = a_fn(k), b = b_fn(k);
        double gap = std::max(0.0, k - prm.big_k);
        if (a < prm.kappa_curv * gap * gap + 2.0 * prm.k1 * prm.delta - 1e-12)
            throw HypothesisViolated("A(k) below the curvature floor", k);
        if (std::abs(b) > prm.k2 * prm.delta * (1.0 + 1e-12))
            throw HypothesisViolated("|B(k)| exceeds K2 delta", k);
        if (std::abs(b - b_fn(0.0)) >
            prm.k2 * prm.r_support * prm.r_support * prm.delta * k * k * (1.0 + 1e-9) + 1e-14)
            throw HypothesisViolated("|B(k)-B(0)| exceeds K2 R^2 delta k^2", k);
    }
    BoundCheckReport rep;
    // LHS: 2 pi int (A - sqrt(A^2-B^2)) k dk = 2 pi int B^2/(A + sqrt(A^2-B^2)) k dk
    auto lhs_f = [&](double k) {
        double a = a_fn(k), b = b_fn(k);
        double root = std::sqrt(std::max(0.0, (a - b) * (a + b)));
        return b * b / (a + root) * k;
    };
    rep.lhs = 2.0 * pi *
              quad::integrate(lhs_f, 0.0, prm.k_max, 1e-13, 1e-10).value;
    double b0 = b_fn(0.0);
    auto rhs_f = [&](double k) {
        double b = b_fn(k);
        double num = (k <= 1.0 / prm.elldelta) ? (b - b0) * (b + b0) : b * b;
        return num / (2.0 * k);
    };
    rep.rhs_main = 2.0 * pi / prm.kappa_curv *
                   quad::integrate(rhs_f, prm.k_max * 1e-9, prm.k_max, 1e-13, 1e-10).value;
    double d = prm.delta, k2 = prm.k2, kap = prm.kappa_curv;
    rep.err_k2 = k2 * k2 / prm.k1 * d * prm.big_k * prm.big_k;
    rep.err_d2 = k2 * k2 * d * d / kap *
                 (1.0 + prm.r_support * prm.r_support / (prm.elldelta * prm.elldelta));
    rep.err_log = k2 * k2 * d * d / kap *
                  std::abs(std::log(2.0 * prm.big_k * prm.elldelta));
    double opt1 = std::pow(k2 * d, 4) / std::pow(kap, 3) / std::pow(prm.big_k, 4);
    double opt2 = k2 * k2 * d * d / (kap * prm.k1 * prm.k1) *
                  std::abs(2.0 * rep.rhs_main * prm.kappa_curv);
    rep.err_min = std::min(opt1, opt2);
    double errs = rep.err_k2 + rep.err_d2 + rep.err_log + rep.err_min;
    rep.fitted_c = std::max(0.0, (rep.lhs - rep.rhs_main) / errs);
    rep.finite = std::isfinite(rep.lhs) && std::isfinite(rep.rhs_main);
    return rep;
}

// ---------------------------------------------------------------------------
// W1 -> g substitution error
// ---------------------------------------------------------------------------

struct WSubstitutionReport {
    double i_w1 = 0.0;
    double i_g = 0.0;
    double difference = 0.0; // |I(k^2, W1hat) - I(k^2, ghat)|
    double bound = 0.0;      // rho^2 delta^2 / K_ell + rho^2 delta eps_N
    double fitted_c = 0.0;
};

inline WSubstitutionReport w_substitution_check(
    const std::function<double(double)>& w1hat, double w1hat0,
    const std::function<double(double)>& ghat, double ghat0, double rho,
    double delta, double eps_n, double k_ell, double elldelta,
    double osc_radius = 0.0) {
    BogIntegrand base;
    base.w = ghat;
    base.sub = ghat;
    base.sub0 = ghat0;
    base.rho = rho;
    base.epsilon = eps_n;
    base.elldelta = elldelta;
    base.w0 = ghat0;
    base.osc_radius = osc_radius;

    BogIntegrand pert = base;
    pert.w = w1hat;
    pert.w0 = w1hat0;
    pert.sub = ghat; // the subtraction profile stays ghat in both
    pert.sub0 = ghat0;

    WSubstitutionReport rep;
    rep.i_g = bog_energy_integral(base).value;
    rep.i_w1 = bog_energy_integral(pert).value;
    rep.difference = std::abs(rep.i_w1 - rep.i_g);
    rep.bound = rho * rho * delta * delta / k_ell + rho * rho * delta * eps_n;
    rep.fitted_c = rep.difference / rep.bound;
    return rep;
}

} // namespace bose2d::bog
