#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "bose2d/bogoliubov.hpp"
#include "bose2d/constants.hpp"

using namespace bose2d;
using namespace bose2d::bog;

namespace {
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double n = double(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
} // namespace

TEST_CASE("pairing coefficients: closed-form point and limits") {
    // p^2 = 2 t: E = 2 sqrt(2) t, alpha = -1/(4 sqrt 2), gamma = (3 - 2 sqrt 2)/(4 sqrt 2)
    double t = 0.7;
    auto c = bog_coefficients(std::sqrt(2.0 * t), 1.0, t);
    CHECK(std::abs(c.alpha - (-1.0 / (4.0 * std::sqrt(2.0)))) < 1e-15);
    CHECK(std::abs(c.gamma - (3.0 - 2.0 * std::sqrt(2.0)) / (4.0 * std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(c.alpha * c.alpha - 1.0 / 32.0) < 1e-16);

    // free mode
    auto z = bog_coefficients(1.0, 1.0, 0.0);
    CHECK(z.alpha == 0.0);
    CHECK(z.gamma == 0.0);

    // high-momentum limit
    auto h = bog_coefficients(1e6, 1.0, 1.0);
    CHECK(std::abs(h.alpha) < 1e-11);
    CHECK(h.gamma < 1e-23);

    CHECK_THROWS_AS(bog_coefficients(0.0, 1.0, 1.0), ZeroMomentum);
}

TEST_CASE("alpha^2 = gamma (gamma + 1) on random modes") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> logu(-6.0, 6.0);
    for (int i = 0; i < 10000; ++i) {
        double p = std::pow(10.0, logu(rng));
        double t = std::pow(10.0, logu(rng));
        auto c = bog_coefficients(p, 1.0, t);
        double lhs = c.alpha * c.alpha;
        double rhs = c.gamma * (c.gamma + 1.0);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        CHECK(c.gamma >= 0.0);
        CHECK(c.alpha <= 0.0);
    }
}

TEST_CASE("mode diagonalization: worked examples") {
    auto m = diagonalize_mode(5.0, 3.0, 0.0);
    CHECK(std::abs(m.d - 4.5) < 1e-15);
    CHECK(std::abs(m.alpha - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(m.c0) == 0.0);
    CHECK(std::abs(m.shift - (-1.0)) < 1e-15);
    CHECK(!m.degenerate);

    // already diagonal up to a displacement
    std::complex<double> kap(0.3, -0.4);
    auto d0 = diagonalize_mode(2.0, 0.0, kap);
    CHECK(d0.d == 2.0);
    CHECK(d0.alpha == 0.0);
    CHECK(std::abs(d0.shift - (-2.0 * std::norm(kap) / 2.0)) < 1e-15);

    // degenerate B = A branch
    auto dg = diagonalize_mode(1.0, 1.0, 0.0);
    CHECK(dg.degenerate);
    CHECK(dg.alpha == 1.0);
    CHECK(std::abs(dg.d - 0.5) < 1e-15);

    CHECK_THROWS_AS(diagonalize_mode(1.0, 2.0, 0.0), Unstable);
    CHECK_THROWS_AS(diagonalize_mode(-1.0, 0.0, 0.0), Unstable);
}

TEST_CASE("mode diagonalization: inverse identities on random inputs") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        double a = 1e-3 + 10.0 * u(rng);
        double b = (2.0 * u(rng) - 1.0) * a * 0.999;
        std::complex<double> kap(u(rng), u(rng));
        auto m = diagonalize_mode(a, b, kap);
        // sqrt(A^2 - B^2) = 2D - A and B alpha = A - (2D - A)
        CHECK(std::abs(m.root - (2.0 * m.d - a)) < 1e-12 * a);
        CHECK(std::abs(m.b * m.alpha - (a - (2.0 * m.d - a))) < 1e-12 * a);
        CHECK(std::abs(m.alpha) < 1.0);
        CHECK(m.d >= 0.5 * a);
        CHECK(m.shift <= 0.0);
    }
}

TEST_CASE("coefficient sums over the momentum lattice") {
    // ghat == 0: both sums vanish
    auto zero = coefficient_sums(50.0, 1.0, [](double) { return 0.0; }, 0.0, 0.1, 5.0);
    CHECK(zero.sum_abs_alpha == 0.0);
    CHECK(zero.sum_gamma == 0.0);

    // shell-type ghat: ratios bounded across a 3-point sweep in delta;
    // the shell radius sits well inside the healing scale, as in the physical
    // regime, so all modes are stable
    for (double delta : {0.05, 0.1, 0.2}) {
        double g0 = 8.0 * pi * delta;
        double rho = 1.0;
        double b = 0.1 / std::sqrt(rho * g0);
        auto ghat = [=](double p) { return g0 * bessel::j0(b * p); };
        double box = 40.0 / std::sqrt(rho * g0);
        auto s = coefficient_sums(box, rho, ghat, g0, delta, 60.0 * std::sqrt(rho * g0), b);
        CHECK(s.c_alpha > 0.0);
        CHECK(s.c_alpha < 10.0);
        CHECK(s.c_gamma > 0.0);
        CHECK(s.c_gamma < 10.0);
    }

    // extensivity: doubling L scales both sums by about 4
    {
        double delta = 0.1, rho = 1.0;
        double g0 = 8.0 * pi * delta;
        double b = 0.1 / std::sqrt(rho * g0);
        auto ghat = [=](double p) { return g0 * bessel::j0(b * p); };
        // the 1/|p| region contributes an O(1/L) boundary correction, so the
        // box must be large for the factor-4 claim to hold within 5%
        double box = 150.0 / std::sqrt(rho * g0);
        double pmax = 40.0 * std::sqrt(rho * g0);
        auto s1 = coefficient_sums(box, rho, ghat, g0, delta, pmax, b);
        auto s2 = coefficient_sums(2.0 * box, rho, ghat, g0, delta, pmax, b);
        CHECK(std::abs(s2.sum_abs_alpha / s1.sum_abs_alpha - 4.0) < 0.2);
        CHECK(std::abs(s2.sum_gamma / s1.sum_gamma - 4.0) < 0.2);
    }
}

TEST_CASE("dimensionless J(c0): quadrature vs closed form") {
    for (double c0 : {1.0, 0.1, 1e-3}) {
        double q = dimensionless_j_quadrature(c0);
        double c = dimensionless_j_closed(c0);
        CHECK(std::abs(q - c) < 1e-8);
    }
    // value at c0 = 1: 2 pi (1/8 - log2/4) ~ -0.3034
    CHECK(std::abs(dimensionless_j_closed(1.0) - (-0.30339)) < 1e-4);
    // c0 -> c0/e increases J by exactly pi
    CHECK(std::abs(dimensionless_j_closed(0.5 / std::exp(1.0)) -
                   dimensionless_j_closed(0.5) - pi) < 1e-14);
    double jq1 = dimensionless_j_quadrature(0.5 / std::exp(1.0));
    double jq2 = dimensionless_j_quadrature(0.5);
    CHECK(std::abs(jq1 - jq2 - pi) < 1e-8);
}

TEST_CASE("constant-w integral: k-space quadrature vs closed form at eps = 0") {
    double rho = 0.7;
    double w0 = 2.3;
    for (double c0 : {1.0, 0.1, 1e-3}) {
        double elldelta = 1.0 / (c0 * std::sqrt(rho * w0));
        BogIntegrand spec;
        spec.w = [=](double) { return w0; };
        spec.rho = rho;
        spec.epsilon = 0.0;
        spec.elldelta = elldelta;
        spec.w0 = w0;
        auto got = bog_energy_integral(spec, 1e-10, 3e3);
        double want = bog_integral_closed_form(rho, w0, 0.0, elldelta);
        CHECK(std::abs(got.value - want) < 1e-8 * std::abs(want) + 1e-12);
    }
    // eps > 0: the q-space quadrature carries the comparison
    for (double eps : {0.0, 0.1}) {
        for (double c0 : {1.0, 0.1, 1e-3}) {
            double elldelta = std::sqrt(1.0 - eps) / (c0 * std::sqrt(rho * w0));
            double got = bog_integral_constant_w_quadrature(rho, w0, eps, elldelta);
            double want = bog_integral_closed_form(rho, w0, eps, elldelta);
            CHECK(std::abs(got - want) < 1e-8 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("LHY-form rewriting matches the raw closed form at delta0") {
    // with w0 = 8 pi delta and ell_delta = (e^Gamma/2) a e^{1/(2 delta)}, the
    // closed form equals 4 pi rho^2 delta^2 (1/delta - 1/Y + log delta + const)
    double a = 1.0;
    double rho = 1e-8 / (a * a);
    double y = 1.0 / std::abs(std::log(rho * a * a));
    double delta = 1.0 / (1.0 / y + std::log(1.0 / y)); // delta0
    double w0 = 8.0 * pi * delta;
    double elldelta = 0.5 * std::exp(euler_gamma) * a * std::exp(1.0 / (2.0 * delta));
    double raw = bog_integral_closed_form(rho, w0, 0.0, elldelta);
    double lhy = bog_integral_lhy_form(rho, delta, y);
    CHECK(std::abs(raw - lhy) < 1e-12 * std::abs(lhy));
}

TEST_CASE("integral scales like rho^2 and decays like k^-4 after subtraction") {
    double w0 = 1.0;
    double elldelta = 200.0; // c0 well below 1, so the log drift stays mild
    auto value = [&](double rho) {
        BogIntegrand spec;
        spec.w = [=](double) { return w0; };
        spec.rho = rho;
        spec.epsilon = 0.0;
        spec.elldelta = elldelta;
        spec.w0 = w0;
        return bog_energy_integral(spec).value;
    };
    double i1 = value(1e-2);
    double i2 = value(0.25e-2);
    // both terms quadratic in rho, up to the slow log drift
    CHECK(std::abs(i2 / i1) < 1.5 / 16.0);
    CHECK(std::abs(i2 / i1) > 0.5 / 16.0);

    // tail slope of the subtracted integrand over the last decade
    BogIntegrand spec;
    spec.w = [=](double) { return w0; };
    spec.rho = 1.0;
    spec.epsilon = 0.0;
    spec.elldelta = 2.0;
    spec.w0 = w0;
    double kmax = 1e3 * std::sqrt(spec.rho * w0);
    std::vector<double> lk, lf;
    for (double k = 0.1 * kmax; k <= kmax; k *= 1.3) {
        lk.push_back(std::log(k));
        lf.push_back(std::log(std::abs(bog::detail::bog_f(spec, k))));
    }
    double slope = fit_slope(lk, lf);
    CHECK(slope > -4.3);
    CHECK(slope < -3.7);
}

TEST_CASE("I_eps decreases in eps for a decaying profile") {
    // with the subtraction held fixed, the head term is pointwise decreasing
    // in eps, so the integral must fall
    double rho = 1.0, w0 = 1.5, r = 1.0;
    auto w = [=](double k) { return w0 * std::exp(-k * k * r * r); };
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        BogIntegrand spec;
        spec.w = w;
        spec.sub = w;
        spec.sub0 = w0;
        spec.rho = rho;
        spec.epsilon = eps;
        spec.elldelta = 2.0;
        spec.w0 = w0;
        double v = bog_energy_integral(spec).value;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("tau kernel vs k^2 kernel with the explicit parameter choice") {
    double rho = 1.0;
    double prev_diff = std::numeric_limits<double>::infinity();
    for (double y : {0.2, 0.1, 0.05}) {
        double delta = 1.0 / (1.0 / y + std::log(1.0 / y));
        double g0 = 8.0 * pi * delta;
        double elld = 0.5 * std::exp(euler_gamma) / std::sqrt(rho * y);
        double b = elld / 30.0;
        auto ghat = [=](double k) { return g0 * bessel::j0(b * k); };
        auto prm = tau_params_explicit_choice(y, rho);
        BogIntegrand base;
        base.w = ghat;
        base.sub = ghat;
        base.sub0 = g0;
        base.rho = rho;
        base.epsilon = std::pow(y, 1.0 + 1.0 / 512.0); // eps_N = K_N^{-1} Y
        base.elldelta = elld;
        base.w0 = g0;
        base.osc_radius = b;
        BogIntegrand tau = base;
        tau.kernel = [=](double k) { return tau_kernel(k, prm); };
        tau.extra_cuts = {0.5 / (prm.s * prm.ell), 0.5 / (prm.d * prm.s * prm.ell)};
        double i_k2 = bog_energy_integral(base).value;
        double i_tau = bog_energy_integral(tau).value;
        double diff = std::abs(i_tau - i_k2);
        double k_ell = std::pow(y, -1.0 / 2048.0);
        double bound = rho * rho * delta * delta *
                       (prm.d + prm.eps_t * std::abs(std::log(y)) +
                        1.0 / (prm.s * k_ell));
        double fitted = diff / bound;
        CHECK(std::isfinite(fitted));
        CHECK(fitted < 50.0);
        // the replacement error shrinks down the sweep
        CHECK(diff < prev_diff);
        prev_diff = diff;
    }
}

TEST_CASE("general Bogoliubov bound: trivial and reducible cases") {
    double delta = 0.1, elldelta = 10.0, kcap = 40.0;
    BoundCheckParams prm;
    prm.kappa_curv = 1.0;
    prm.big_k = 0.2;
    prm.k1 = 1.0;
    prm.k2 = 1.0;
    prm.r_support = 1.0;
    prm.elldelta = elldelta;
    prm.delta = delta;
    prm.k_max = kcap;

    // B == 0: LHS = 0, any C works
    auto a_fn = [&](double k) {
        double gap = std::max(0.0, k - prm.big_k);
        return gap * gap + 2.0 * prm.k1 * delta;
    };
    auto rep0 = bog_integral_bound_check(a_fn, [](double) { return 0.0; }, prm);
    CHECK(rep0.lhs == 0.0);
    CHECK(rep0.fitted_c == 0.0);

    // constant B: LHS finite, fitted C finite
    auto b_const = [&](double) { return 0.5 * delta; };
    auto rep1 = bog_integral_bound_check(a_fn, b_const, prm);
    CHECK(rep1.finite);
    CHECK(rep1.lhs > 0.0);
    CHECK(std::isfinite(rep1.fitted_c));

    // scaling delta -> delta/2 decreases the LHS
    BoundCheckParams prm2 = prm;
    prm2.delta = delta / 2.0;
    auto a_fn2 = [&](double k) {
        double gap = std::max(0.0, k - prm.big_k);
        return gap * gap + 2.0 * prm.k1 * prm2.delta;
    };
    auto b2 = [&](double) { return 0.25 * delta; };
    auto rep2 = bog_integral_bound_check(a_fn2, b2, prm2);
    CHECK(rep2.lhs < rep1.lhs);

    // hypothesis violation reports the offending k
    auto bad_b = [&](double k) { return k > 3.0 ? 5.0 * delta : 0.1 * delta; };
    try {
        bog_integral_bound_check(a_fn, bad_b, prm);
        FAIL("expected HypothesisViolated");
    } catch (const HypothesisViolated& e) {
        CHECK(e.offending_k > 3.0);
    }
}

TEST_CASE("W1 substitution error and its K_ell scaling") {
    double rho = 1.0, delta = 0.08;
    double g0 = 8.0 * pi * delta;
    double r2 = 1.0; // squared support scale of the Gaussian model profile
    double elld = 20.0;
    auto ghat = [=](double k) { return g0 * std::exp(-k * k * r2); };

    // W1 == g exactly (ell = infinity): zero difference
    auto same = w_substitution_check(ghat, g0, ghat, g0, rho, delta, 0.0, 8.0, elld);
    CHECK(same.difference == 0.0);

    // position-space distortion W1(x) = g(x)(1 + |x|^2/ell^2) transforms to
    // ghat + (-Laplacian_k ghat)/ell^2 = ghat (1 + 4 r2 (1 - k^2 r2)/ell^2)
    double prev = -1.0;
    std::vector<double> lx, ly;
    for (double k_ell : {4.0, 8.0, 16.0, 32.0}) {
        double ell = k_ell; // units with rho^{-1/2} Y^{-1/2} = 1
        auto w1 = [=](double k) {
            return ghat(k) * (1.0 + 4.0 * r2 * (1.0 - k * k * r2) / (ell * ell));
        };
        double w10 = w1(0.0);
        auto rep = w_substitution_check(w1, w10, ghat, g0, rho, delta, 0.0, k_ell, elld);
        lx.push_back(std::log(1.0 / k_ell));
        ly.push_back(std::log(rep.fitted_c));
        if (prev >= 0.0) CHECK(rep.difference < prev); // ell doubled: error shrinks
        prev = rep.difference;
    }
    // the lemma's bound spends one K_ell power while the difference decays
    // like K_ell^{-2}; the fitted constant therefore scales like K_ell^{-1}
    double slope = fit_slope(lx, ly);
    CHECK(slope > 0.7);
    CHECK(slope < 1.3);

    // eps_N = 0 keeps only the K_ell^{-1} term in the bound
    auto repn = w_substitution_check(ghat, g0, ghat, g0, rho, delta, 0.0, 8.0, elld);
    CHECK(repn.bound == rho * rho * delta * delta / 8.0);
}
