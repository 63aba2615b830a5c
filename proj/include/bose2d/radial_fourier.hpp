#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bose2d/bessel.hpp"
#include "bose2d/constants.hpp"
#include "bose2d/errors.hpp"
#include "bose2d/parallel.hpp"
#include "bose2d/potentials.hpp"
#include "bose2d/profiles.hpp"
#include "bose2d/quadrature.hpp"

namespace bose2d::fourier {

// Convention: fhat(p) = int e^{-i x p} f(x) dx, which for radial f reduces to
//   fhat(p) = 2 pi int_0^inf f(r) J0(p r) r dr.

// Transform of a radial function given on [r_lo, r_hi], splitting at the
// passed break radii and at J0(p r) zeros once the phase p*r gets large.
// Interior Bessel arches take a single GK15 panel; segments touching a break
// radius or the boundaries are integrated adaptively.
inline double hankel_point(const std::function<double(double)>& f, double r_lo,
                           double r_hi, double p,
                           const std::vector<double>& breaks = {},
                           double abs_tol = 1e-12, double rel_tol = 1e-12) {
    auto integrand = [&](double r) { return f(r) * bessel::j0(p * r) * r; };
    struct Cut { double r; bool arch; };
    std::vector<Cut> cuts;
    for (double b : breaks)
        if (b > r_lo && b < r_hi) cuts.push_back({b, false});
    if (p * r_hi > bessel::j0_zero(1)) {
        const auto& zeros = bessel::j0_zeros_upto(p * r_hi);
        for (double z : zeros) {
            double r = z / p;
            if (r >= r_hi) break;
            if (r > r_lo) cuts.push_back({r, true});
        }
    }
    cuts.push_back({r_hi, false});
    std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.r < b.r; });
    double total = 0.0;
    double lo = r_lo;
    bool lo_is_arch = false;
    for (const auto& c : cuts) {
        if (c.r <= lo) continue;
        if (lo_is_arch && c.arch) {
            total += quad::fixed_gk15(integrand, lo, c.r).value;
        } else {
            total += quad::integrate(integrand, lo, c.r, abs_tol, rel_tol).value;
        }
        lo = c.r;
        lo_is_arch = c.arch;
    }
    return 2.0 * pi * total;
}

inline MomentumProfile hankel_transform(const RadialProfile& f,
                                        const std::vector<double>& p_grid,
                                        double abs_tol = 1e-12,
                                        double rel_tol = 1e-12) {
    if (f.tail.kind == TailDescriptor::Kind::log_of_r_over_d &&
        f.tail.amplitude != 0.0)
        throw NotIntegrable("log tails are not L1; use the distributional pairings");
    if (f.tail.kind == TailDescriptor::Kind::power_law && f.tail.exponent <= 2.0 &&
        f.tail.amplitude != 0.0)
        throw NotIntegrable("power tail with exponent <= 2 is not L1 in 2D");
    if (f.grid.empty()) throw Error("hankel_transform: empty profile");

    auto eval = [&](double r) { return f(r); };
    double r_hi = f.grid.back();
    MomentumProfile out;
    out.grid = p_grid;
    out.values.resize(p_grid.size());
    std::vector<double> breaks(f.grid.begin(), f.grid.end());
    auto compact_part = [&](double p) {
        return hankel_point(eval, 0.0, r_hi, p, breaks, abs_tol, rel_tol);
    };
    // analytic power tail beyond the grid, integrated numerically with
    // J0-arch acceleration
    auto tail_part = [&](double p) -> double {
        if (f.tail.kind != TailDescriptor::Kind::power_law || f.tail.amplitude == 0.0)
            return 0.0;
        auto g = [&](double r) {
            return f.tail.amplitude * std::pow(r, -f.tail.exponent) *
                   bessel::j0(p * r) * r;
        };
        if (p * r_hi > 2.0) {
            auto res = quad::integrate_j0_tail(g, r_hi, p, abs_tol, rel_tol);
            return 2.0 * pi * res.value;
        }
        auto head = quad::integrate(g, r_hi, bessel::j0_zero(1) / std::max(p, 1e-300),
                                    abs_tol, rel_tol);
        if (p == 0.0) {
            auto res = quad::integrate_to_inf(g, r_hi, r_hi, abs_tol, rel_tol);
            return 2.0 * pi * res.value;
        }
        auto res = quad::integrate_j0_tail(g, bessel::j0_zero(1) / p, p, abs_tol, rel_tol);
        return 2.0 * pi * (head.value + res.value);
    };
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        out.values[i] = compact_part(p_grid[i]) + tail_part(p_grid[i]);
    out.at_zero = compact_part(0.0) + tail_part(0.0);
    return out;
}

// shell measure: mass concentrated on |x| = b transforms to mass * J0(b p)
inline double shell_hat(const potentials::PotentialSpec& shell, double p) {
    if (shell.kind != potentials::Kind::shell_measure)
        throw Error("shell_hat needs a shell_measure spec");
    return shell.shell_mass * bessel::j0(shell.shell_radius * p);
}

inline MomentumProfile shell_transform(const potentials::PotentialSpec& shell,
                                       const std::vector<double>& p_grid) {
    MomentumProfile out;
    out.grid = p_grid;
    out.values.resize(p_grid.size());
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        out.values[i] = shell_hat(shell, p_grid[i]);
    out.at_zero = shell.shell_mass;
    return out;
}

// ---------------------------------------------------------------------------
// ghat of a scattering solution, with Taylor data for the small-p regime
// ---------------------------------------------------------------------------

class GhatEvaluator {
public:
    explicit GhatEvaluator(const potentials::ScatteringSolution& sol,
                           double abs_tol = 1e-12, double rel_tol = 1e-12)
        : sol_(&sol), abs_tol_(abs_tol), rel_tol_(rel_tol) {
        breaks_ = sol.potential.discontinuities();
        r_lo_ = sol.raw.r_start;
        r_hi_ = sol.support;
        auto g = [&](double r) { return sol.g_at(r); };
        at0_ = hankel_point(g, r_lo_, r_hi_, 0.0, breaks_, abs_tol_, rel_tol_);
        // ghat(p) = at0 - q2 p^2 + q4 p^4 + ...   (J0 series termwise)
        auto m = [&](int k) {
            auto f = [&](double r) { return sol.g_at(r) * std::pow(r, k + 1); };
            double acc = 0.0;
            double lo = r_lo_;
            std::vector<double> cuts = breaks_;
            cuts.push_back(r_hi_);
            std::sort(cuts.begin(), cuts.end());
            for (double c : cuts) {
                if (c <= lo || c > r_hi_) continue;
                acc += quad::integrate(f, lo, c, abs_tol_, rel_tol_).value;
                lo = c;
            }
            return acc;
        };
        q2_ = pi / 2.0 * m(2);
        q4_ = pi / 32.0 * m(4);
    }

    double at_zero() const { return at0_; }
    double small_p_radius() const { return 1e-3 / r_hi_; }

    double operator()(double p) const {
        if (p * r_hi_ < 1e-3) return at0_ - q2_ * p * p + q4_ * std::pow(p, 4);
        auto g = [&](double r) { return sol_->g_at(r); };
        return hankel_point(g, r_lo_, r_hi_, p, breaks_, abs_tol_, rel_tol_);
    }

    // ghat(p) - ghat(0), stable against cancellation for small p
    double minus_at0(double p) const {
        if (p * r_hi_ < 1e-3) return -q2_ * p * p + q4_ * std::pow(p, 4);
        return (*this)(p)-at0_;
    }

    double support() const { return r_hi_; }

private:
    const potentials::ScatteringSolution* sol_;
    std::vector<double> breaks_;
    double r_lo_, r_hi_, abs_tol_, rel_tol_, at0_, q2_, q4_;
};

namespace detail {

// Integral of h over [c, x_max / r_osc] where h oscillates in phase with
// J0(k r_osc): adaptive up to the first Bessel zero, one GK15 panel per arch
// after that. Arches are independent and run in parallel with a fixed
// reduction order.
template <class H>
inline double arch_integral(const H& h, double c, double r_osc, double x_max,
                            double abs_tol, double rel_tol) {
    double k_end = x_max / r_osc;
    if (k_end <= c) return 0.0;
    const auto& zeros = bessel::j0_zeros_upto(x_max);
    std::vector<double> ks;
    ks.reserve(zeros.size() + 1);
    for (double z : zeros) {
        double k = z / r_osc;
        if (k > c && k < k_end) ks.push_back(k);
    }
    ks.push_back(k_end);
    double head = quad::integrate(h, c, ks.front(), abs_tol, rel_tol).value;
    // blocks of arches run in parallel; once two consecutive blocks stop
    // contributing the rest of the range is dead and is skipped
    double body = 0.0;
    const std::size_t m = ks.size() - 1;
    const std::size_t block = 16;
    int quiet = 0;
    for (std::size_t start = 0; start < m && quiet < 2; start += block) {
        std::size_t len = std::min(block, m - start);
        double blk = parallel_sum(
            len,
            [&](std::size_t i) {
                return quad::fixed_gk15(h, ks[start + i], ks[start + i + 1]).value;
            },
            1);
        body += blk;
        quiet = (std::abs(blk) < 1e-3 * abs_tol) ? quiet + 1 : 0;
    }
    return head + body;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Distributional pairings
// ---------------------------------------------------------------------------

// <FT of log(|x|/D), phi> = -2 pi int (phi(p) - phi(0) 1_{|p| <= 2 e^-Gamma/D}) / p^2 dp
inline double log_fourier_pairing(const std::function<double(double)>& phi,
                                  double D, double abs_tol = 1e-11,
                                  double rel_tol = 1e-11) {
    if (!(D > 0)) throw Error("log_fourier_pairing: D must be positive");
    double c = 2.0 * std::exp(-euler_gamma) / D;
    double phi0 = phi(0.0);
    auto inner = [&](double p) { return (phi(p) - phi0) / p; };
    auto outer = [&](double p) { return phi(p) / p; };
    double v_in = quad::integrate(inner, c * 1e-10, c, abs_tol, rel_tol).value;
    double v_out = quad::integrate_to_inf(outer, c, std::max(c, 1.0), abs_tol, rel_tol).value;
    return -2.0 * pi * 2.0 * pi * (v_in + v_out);
}

// <FT of omega, u> = int (ghat(p) u(p) - ghat(0) u(0) 1_{|p| <= 1/ell_delta}) / (2 p^2) dp
// The momentum range is truncated at p = x_max / support, past which the
// integrand's J0^2-type envelope contributes below the requested tolerance.
inline double omega_hat_pairing(const GhatEvaluator& ghat, double ell_delta,
                                const std::function<double(double)>& u,
                                double abs_tol = 1e-11, double rel_tol = 1e-9,
                                double x_max = 400.0) {
    double c = 1.0 / ell_delta;
    double u0 = u(0.0);
    double g0 = ghat.at_zero();
    auto inner = [&](double p) { return (ghat(p) * u(p) - g0 * u0) / (2.0 * p); };
    auto outer = [&](double p) { return ghat(p) * u(p) / (2.0 * p); };
    double scale = std::max(1.0, std::abs(g0 * u0));
    double v_in = quad::integrate(inner, c * 1e-8, c, abs_tol * scale, rel_tol).value;
    double v_out = detail::arch_integral(outer, c, ghat.support(), x_max,
                                         abs_tol * scale, rel_tol);
    return 2.0 * pi * (v_in + v_out);
}

// ---------------------------------------------------------------------------
// ghat-omega at zero, two routes
// ---------------------------------------------------------------------------

struct GOmegaReport {
    double route_a = 0.0;           // momentum integral, with the convention constant
    double route_b = 0.0;           // position-space oracle: int g omega dx
    double convention_constant = 1.0 / (4.0 * pi * pi);
    double interior_subtracted = 0.0; // (2pi)^-2 int_{|k|<=c} (ghat^2-ghat0^2)/(2k^2)
    double exterior = 0.0;            // (2pi)^-2 int_{|k|>c} ghat^2/(2k^2)
    double c_332 = 0.0;               // |interior| / (R^2 delta^2 / ell_delta^2)
    double c_intg2 = 0.0;             // |exterior| / delta
    double c_gw = 0.0;                // |route_a| / delta
};

inline GOmegaReport g_omega_zero(const potentials::ScatteringSolution& sol,
                                 double abs_tol = 1e-11, double rel_tol = 1e-9) {
    GOmegaReport rep;
    GhatEvaluator ghat(sol, 1e-11, 3e-10);
    double g0 = ghat.at_zero();
    double c = 1.0 / sol.ell_delta();
    double scale = std::max(1e-300, g0 * g0);

    // interior: (ghat^2 - ghat0^2) / (2k^2), Taylor-stabilized near k = 0
    auto inner = [&](double k) {
        double diff = ghat.minus_at0(k);
        double sum = 2.0 * g0 + diff;
        return diff * sum / (2.0 * k);
    };
    double v_in = quad::integrate(inner, 0.0, c, abs_tol * scale, rel_tol).value;
    // exterior: ghat^2/(2k^2); positive, envelope decays like k^-4
    auto outer = [&](double k) {
        double g = ghat(k);
        return g * g / (2.0 * k);
    };
    const double x_max = 200.0;
    double v_out = detail::arch_integral(outer, c, ghat.support(), x_max,
                                         abs_tol * scale, rel_tol);
    // truncation remainder from the jump-driven J1 asymptotics of ghat:
    // each jump Delta_j of g at radius r_j adds (2 pi/3) r_j Delta_j^2 / K^3
    {
        double k_end = x_max / ghat.support();
        double rem = 0.0;
        for (double rj : sol.potential.discontinuities()) {
            if (rj <= 0.0 || rj > sol.support) continue;
            double dj = sol.g_at(rj * (1.0 - 1e-9)) - sol.g_at(rj * (1.0 + 1e-9));
            rem += rj * dj * dj;
        }
        v_out += 2.0 * pi / 3.0 * rem / (k_end * k_end * k_end);
    }
    rep.interior_subtracted = 2.0 * pi * v_in * rep.convention_constant;
    rep.exterior = 2.0 * pi * v_out * rep.convention_constant;
    rep.route_a = rep.interior_subtracted + rep.exterior;

    // route B oracle: int g omega dx = 2 pi int v phi (1 - phi) r dr
    {
        auto f = [&](double r) { return sol.g_at(r) * sol.omega_at(r) * r; };
        double acc = 0.0;
        double lo = sol.raw.r_start;
        std::vector<double> cuts = sol.potential.discontinuities();
        cuts.push_back(sol.support);
        std::sort(cuts.begin(), cuts.end());
        for (double cc : cuts) {
            if (cc <= lo || cc > sol.support) continue;
            acc += quad::integrate(f, lo, cc, abs_tol, rel_tol).value;
            lo = cc;
        }
        rep.route_b = 2.0 * pi * acc;
    }

    double R = sol.support, d = sol.delta, ld = sol.ell_delta();
    rep.c_332 = std::abs(rep.interior_subtracted) / (R * R * d * d / (ld * ld));
    rep.c_intg2 = std::abs(rep.exterior) / d;
    rep.c_gw = std::abs(rep.route_a) / d;
    return rep;
}

// ---------------------------------------------------------------------------
// Localization function (tensor cos^{M+2} bump)
// ---------------------------------------------------------------------------

struct LocalizationFunction {
    int M = 0;
    double c_m = 0.0;          // normalization: ||chi||_2 = 1
    std::vector<double> coef;  // u(y) = cos^{M+2}(pi y) = sum_m coef[m] cos(2 pi m y)
    // even_coef[i][m] = coef[m] (2 pi m)^{2i} (-1)^i, so that
    // u^{(2i)}(y) = sum_m even_coef[i][m] cos(2 pi m y)
    std::vector<std::vector<double>> even_coef;
    // weight[a][b] of u^{(2a)}(x1) u^{(2b)}(x2) in (1-Delta)^{M/2}(u x u)
    std::vector<std::vector<double>> lap_weight;

    double u(double y) const {
        if (std::abs(y) >= 0.5) return 0.0;
        double s = 0.0;
        for (std::size_t m = 0; m < coef.size(); ++m)
            s += coef[m] * std::cos(2.0 * pi * m * y);
        return s;
    }
    // d^j/dy^j of u
    double u_deriv(int j, double y) const {
        if (std::abs(y) >= 0.5) return 0.0;
        double s = 0.0;
        for (std::size_t m = (j > 0 ? 1 : 0); m < coef.size(); ++m) {
            double w = 2.0 * pi * m;
            s += coef[m] * std::pow(w, j) * std::cos(w * y + 0.5 * pi * j);
        }
        return s;
    }
    // all even derivatives u^{(2i)}, i = 0..M/2, in one pass
    void even_derivs(double y, std::vector<double>& out) const {
        out.assign(even_coef.size(), 0.0);
        if (std::abs(y) >= 0.5) return;
        for (std::size_t m = 0; m < coef.size(); ++m) {
            double c = std::cos(2.0 * pi * m * y);
            for (std::size_t i = 0; i < even_coef.size(); ++i)
                out[i] += even_coef[i][m] * c;
        }
    }
    // int_{-1/2}^{1/2} u(y) e^{-i kappa y} dy (real, even)
    double u_hat(double kappa) const {
        // with e = kappa - 2 pi m, the m-th term is 2 kappa sin(e/2)/(e (kappa + 2 pi m)):
        // sin(kappa/2) = (-1)^m sin(e/2) makes the pole at kappa = 2 pi m removable
        auto sinc_half = [](double e) {
            return std::abs(e) < 1e-6 ? 0.5 * (1.0 - e * e / 24.0) : std::sin(0.5 * e) / e;
        };
        double s = 0.0;
        for (std::size_t m = 0; m < coef.size(); ++m) {
            double w = 2.0 * pi * m;
            double x;
            if (m == 0) {
                x = 2.0 * sinc_half(kappa);
            } else {
                double e = kappa - w;
                x = 2.0 * kappa * sinc_half(e) / (kappa + w);
            }
            s += coef[m] * x;
        }
        return s;
    }

    double chi(double x1, double x2) const { return c_m * u(x1) * u(x2); }
    double chi_hat(double k1, double k2) const { return c_m * u_hat(k1) * u_hat(k2); }
    double chi_hat0() const { return c_m * u_hat(0.0) * u_hat(0.0); }

    // (1 - Delta)^{M/2} chi at a point, via the cosine series
    double one_minus_laplacian_pow(double x1, double x2) const {
        thread_local std::vector<double> d1, d2;
        even_derivs(x1, d1);
        even_derivs(x2, d2);
        double total = 0.0;
        for (std::size_t a = 0; a < lap_weight.size(); ++a)
            for (std::size_t b = 0; b < lap_weight[a].size(); ++b)
                total += lap_weight[a][b] * d1[a] * d2[b];
        return c_m * total;
    }
};

inline LocalizationFunction localization_chi(int M) {
    if (M < 2 || M % 2 != 0) throw Error("localization_chi: M must be even, >= 2");
    LocalizationFunction chi;
    chi.M = M;
    int n = (M + 2) / 2; // u = cos^{2n}
    chi.coef.resize(n + 1);
    // cos^{2n} theta = 4^{-n} [ binom(2n,n) + 2 sum_m binom(2n, n-m) cos(2 m theta) ]
    auto lbinom = [](int a, int b) {
        return std::exp(std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1));
    };
    double scale = std::pow(4.0, -n);
    chi.coef[0] = scale * lbinom(2 * n, n);
    for (int m = 1; m <= n; ++m) chi.coef[m] = 2.0 * scale * lbinom(2 * n, n - m);
    // derivative and Laplacian-power tables
    int half = M / 2;
    chi.even_coef.assign(half + 1, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i <= half; ++i) {
        double sgn = (i % 2 == 0) ? 1.0 : -1.0;
        for (int m = 0; m <= n; ++m)
            chi.even_coef[i][m] = chi.coef[m] * sgn * std::pow(2.0 * pi * m, 2 * i);
    }
    chi.lap_weight.assign(half + 1, std::vector<double>(half + 1, 0.0));
    for (int a = 0; a <= half; ++a)
        for (int b = 0; a + b <= half; ++b) {
            int i = a + b;
            double sgn = (i % 2 == 0) ? 1.0 : -1.0;
            chi.lap_weight[a][b] = sgn * lbinom(half, i) * lbinom(i, a);
        }
    // normalization by quadrature (the closed form is checked in the tests)
    chi.c_m = 1.0;
    auto u2 = [&](double y) {
        double v = chi.u(y);
        return v * v;
    };
    double i2 = quad::integrate(u2, -0.5, 0.5, 1e-14, 1e-14).value;
    chi.c_m = 1.0 / i2;
    return chi;
}

struct ChiDecayReport {
    double c_chi = 0.0;     // int |(1-Delta)^{M/2} chi|
    double sup_ratio = 0.0; // max over the grid of |chi_hat| (1+|k|^2)^{M/2}
    double worst_k1 = 0.0, worst_k2 = 0.0;
    bool pass = false;
};

inline ChiDecayReport chi_decay_check(const LocalizationFunction& chi, double k_max,
                                      int n_grid = 241) {
    ChiDecayReport rep;
    // C_chi = int |(1-Delta)^{M/2} chi| over the unit square, nested adaptive
    auto row = [&](double x2) {
        auto f = [&](double x1) { return std::abs(chi.one_minus_laplacian_pow(x1, x2)); };
        return quad::integrate(f, -0.5, 0.5, 1e-8, 1e-7).value;
    };
    rep.c_chi = quad::integrate(row, -0.5, 0.5, 1e-8, 1e-7).value;
    // chi_hat is even in each coordinate: scan the positive quadrant
    double sup = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        double k1 = k_max * i / (n_grid - 1);
        for (int j = 0; j < n_grid; ++j) {
            double k2 = k_max * j / (n_grid - 1);
            if (k1 * k1 + k2 * k2 > k_max * k_max) continue;
            double v = std::abs(chi.chi_hat(k1, k2)) *
                       std::pow(1.0 + k1 * k1 + k2 * k2, chi.M / 2.0);
            if (v > sup) {
                sup = v;
                rep.worst_k1 = k1;
                rep.worst_k2 = k2;
            }
        }
    }
    rep.sup_ratio = sup;
    rep.pass = sup <= rep.c_chi;
    return rep;
}

} // namespace bose2d::fourier
