#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wavetrend/constants.hpp"

using namespace wavetrend;

namespace {

// Exact raw singular integrals (refinement linear system at 40-digit precision).
struct RawPair {
    const char* name;
    double i_phi, i_psi;
};
const RawPair kRaw06[] = {
    {"haar", 3.5714285714285714286, 1.8418448803942788655},
    {"s4", 3.713737382791037, 1.915235891974306},
    {"s6", 3.745078383813303, 1.931398965412507},
    {"s8", 3.757549050867557, 1.937830295007822},
    {"s10", 3.763992145990171, 1.941153105902156},
};

LrdBasisConstants synthetic(double alpha, double c_phi_sq, double c_psi_sq, double nu_r,
                            int r, int N) {
    LrdBasisConstants c;
    c.alpha = alpha;
    c.c_phi_sq = c_phi_sq;
    c.c_psi_sq = c_psi_sq;
    c.nu_r = nu_r;
    c.r = r;
    c.support = N;
    return c;
}

}  // namespace

TEST_SUITE("adaptivity_constants") {

TEST_CASE("haar singular integrals match the closed forms") {
    const auto t = cascade_evaluate(find_basis("haar"), 12);
    for (double a : {0.2, 0.4, 0.6, 0.8}) {
        CHECK(singular_product_integral(t, BasisKind::father, a)
              == doctest::Approx(oracles::haar_father_singular(a)).epsilon(1e-10));
        CHECK(singular_product_integral(t, BasisKind::mother, a)
              == doctest::Approx(oracles::haar_mother_singular(a)).epsilon(1e-10));
    }
    // alpha -> 1: diverges like 2/(1-alpha); ratio to the closed form stays 1
    const double a99 = singular_product_integral(t, BasisKind::father, 0.99);
    CHECK(a99 == doctest::Approx(oracles::haar_father_singular(0.99)).epsilon(1e-9));
    CHECK(a99 > 30.0);
    CHECK_THROWS_AS(singular_product_integral(t, BasisKind::father, 1.2), std::domain_error);
    CHECK_THROWS_AS(singular_product_exact(find_basis("s4"), BasisKind::father, 0.0),
                    std::domain_error);
}

TEST_CASE("cell method converges to the exact refinement-system values") {
    for (const auto& raw : kRaw06) {
        const auto& spec = find_basis(raw.name);
        CHECK(singular_product_exact(spec, BasisKind::father, 0.6)
              == doctest::Approx(raw.i_phi).epsilon(1e-12));
        CHECK(singular_product_exact(spec, BasisKind::mother, 0.6)
              == doctest::Approx(raw.i_psi).epsilon(1e-12));
    }
    const auto& s4 = find_basis("s4");
    const auto t12 = cascade_evaluate(s4, 12);
    CHECK(singular_product_integral(t12, BasisKind::father, 0.6)
          == doctest::Approx(3.713737382791037).epsilon(1e-6));
    // resolution M and M+2 agree within 1e-4 relative for alpha <= 0.8
    for (double a : {0.2, 0.4, 0.6, 0.8}) {
        const auto t10 = cascade_evaluate(s4, 10);
        const double v10 = singular_product_integral(t10, BasisKind::father, a);
        const double v12 = singular_product_integral(t12, BasisKind::father, a);
        CHECK(std::abs(v10 - v12) < 1e-4 * std::abs(v12));
    }
}

TEST_CASE("constants positive for every basis and alpha") {
    for (const auto& name : {"haar", "s4", "s6", "s8", "s10"}) {
        const auto& spec = find_basis(name);
        for (double a : {0.2, 0.4, 0.6, 0.8}) {
            const double iphi = singular_product_exact(spec, BasisKind::father, a);
            const double ipsi = singular_product_exact(spec, BasisKind::mother, a);
            CHECK(iphi > 0.0);
            CHECK(ipsi > 0.0);
            // conjugate-quadrature identity: the regime comparison is an exact tie
            CHECK(ipsi == doctest::Approx((std::pow(2.0, a) - 1.0) * iphi).epsilon(1e-10));
        }
    }
}

TEST_CASE("basis_constants wires C_gamma and nu_r") {
    const auto& spec = find_basis("s4");
    const auto t = cascade_evaluate(spec, 12);
    const FarimaModel m{0.2, 1.0};
    const auto c = basis_constants(spec, t, m);
    CHECK(c.alpha == doctest::Approx(0.6));
    CHECK(c.c_phi_sq == doctest::Approx(c_gamma(m) * 3.713737382791037).epsilon(1e-10));
    CHECK(c.c_psi_sq == doctest::Approx(c_gamma(m) * 1.915235891974306).epsilon(1e-10));
    CHECK(std::abs(c.nu_r) == doctest::Approx(0.2165063509461097).epsilon(1e-4));
    CHECK(c.r == 2);
    CHECK(c.support == 3);
    const auto c_cell = basis_constants(spec, t, m, 12);
    CHECK(c_cell.c_phi_sq == doctest::Approx(c.c_phi_sq).epsilon(1e-6));
}

TEST_CASE("c_star: decomposition, N=1 term, doubling rule, frozen value") {
    // Haar, alpha = 0.6, r = 1, int (g')^2 = 1
    const FarimaModel m{0.2, 1.0};
    const double cg = c_gamma(m);
    auto c = synthetic(0.6, cg * oracles::haar_father_singular(0.6),
                       cg * oracles::haar_mother_singular(0.6), -0.25, 1, 1);
    TrendSmoothness s{1, 1.0, 1.0, 0.0, 1.0};
    CHECK(c_star(BasisKind::mother, c, s)
          == doctest::Approx(-1.1682871203078610).epsilon(1e-12));
    CHECK(c_star_parts(c, s).c4 == 0.0);  // N = 1
    TrendSmoothness s2 = s;
    s2.integral_gr_sq = 2.0;
    CHECK(c_star(BasisKind::mother, c, s2) - c_star(BasisKind::mother, c, s)
          == doctest::Approx(1.0 / 2.6).epsilon(1e-12));
    // parts recompose to the phi-variant total
    const auto parts = c_star_parts(c, s);
    CHECK(parts.total(2.0 * c.r + c.alpha)
          == doctest::Approx(c_star(BasisKind::father, c, s)).epsilon(1e-12));
    TrendSmoothness bad = s;
    bad.integral_gr_sq = 0.0;
    CHECK_THROWS_AS(c_star(BasisKind::mother, c, bad), std::domain_error);
    TrendSmoothness wrong_r{2, 1.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(c_star(BasisKind::mother, c, wrong_r), ConfigError);
}

TEST_CASE("delta_n: range, floor identity, log-periodicity") {
    // alpha = 1/2 makes (2r+alpha)/alpha = 5: scaling n by 2^5 preserves Delta_n
    auto c = synthetic(0.5, 1.0 / (std::pow(2.0, 0.5) - 1.0), 1.0, 1.0, 1, 1);
    TrendSmoothness s{1, 1.0, 1.0, 0.0, 1.0};
    for (std::size_t n : {64u, 100u, 1000u, 4096u}) {
        const double dn = delta_n(BasisKind::mother, n, c, s);
        CHECK(dn >= 0.0);
        CHECK(dn < 1.0);
        const double dn2 = delta_n(BasisKind::mother, 32 * n, c, s);
        const double gap = std::abs(dn - dn2);
        CHECK(std::min(gap, 1.0 - gap) < 1e-9);
    }
    // C* = 0 here, so x(32) = (0.5/2.5) * 5 = 1: the fractional part vanishes
    const double d32 = delta_n(BasisKind::mother, 32, c, s);
    CHECK(std::min(d32, 1.0 - d32) < 1e-9);
}

TEST_CASE("regime: strict cases and the tie fixture") {
    const double a = 0.6;
    const double pow_a = std::pow(2.0, a) - 1.0;
    auto case1 = synthetic(a, 1.0, 0.5 * pow_a, 1.0, 1, 1);
    CHECK(regime(case1) == Regime::case_i);
    auto case2 = synthetic(a, 1.0, 2.0 * pow_a, 1.0, 1, 1);
    CHECK(regime(case2) == Regime::case_ii);
    // Haar at alpha = 0.6, from the two singular integrals: an exact tie
    const FarimaModel m{0.2, 1.0};
    const auto t = cascade_evaluate(find_basis("haar"), 12);
    const auto haar = basis_constants(find_basis("haar"), t, m);
    CHECK_THROWS_AS(regime(haar), RegimeTieError);
}

TEST_CASE("optimal_q and optimal_J: floor scaling and errors") {
    // alpha = 1/2, r = 1: n -> 32 n increments q* by exactly one
    auto c = synthetic(0.5, 1.0, 0.2, 1.0, 1, 1);
    TrendSmoothness s{1, 1.0, 1.0, 0.0, 1.0};
    const int q1 = optimal_q(4096, 0, c, s).value;
    const int q2 = optimal_q(32 * 4096, 0, c, s).value;
    CHECK(q2 == q1 + 1);
    CHECK_THROWS_AS(optimal_q(4096, 40, c, s), ConfigError);  // q* would be negative
    const int J1 = optimal_J(4096, c, s).value;
    const int J2 = optimal_J(32 * 4096, c, s).value;
    CHECK(J2 == J1 + 1);
}

TEST_CASE("thresholds: zeros, exact bound, monotonicity, doubling") {
    const FarimaModel m{0.2, 1.0};
    const auto t = cascade_evaluate(find_basis("s4"), 12);
    const auto c = basis_constants(find_basis("s4"), t, m);
    const std::size_t n = 1024;
    const int J = 0, q = 8, q_star = 3;
    const auto del = thresholds(n, J, q, q_star, c, ThresholdRule::theorem);
    REQUIRE(del.size() == static_cast<std::size_t>(q + 1));
    for (int j = 0; j <= q_star; ++j) CHECK(del[j] == 0.0);
    const double a = c.alpha;
    for (int j = q_star + 1; j <= q; ++j) {
        const double expect_sq = 4.0 * std::exp(1.0) * c.c_psi_sq
                               * std::pow(3.0, -1.0 + a) * std::pow(std::log(1024.0), 2.0)
                               / (std::pow(1024.0, a) * std::pow(2.0, (J + j) * (1.0 - a)));
        CHECK(del[j] * del[j] == doctest::Approx(expect_sq).epsilon(1e-12));
        if (j > q_star + 1) CHECK(del[j] < del[j - 1]);  // strictly decreasing
    }
    // doubling n: delta^2 scales by (ln 2n / ln n)^2 * 2^{-alpha}, re-evaluated directly
    const auto del2 = thresholds(2 * n, J, q, q_star, c, ThresholdRule::theorem);
    const double want = std::pow(std::log(2048.0) / std::log(1024.0), 2.0)
                      * std::pow(2.0, -a);
    CHECK(del2[q] * del2[q] / (del[q] * del[q]) == doctest::Approx(want).epsilon(1e-12));
    // the practical rule is the same sigma_j scale with sqrt(2 ln n) in place
    const auto delp = thresholds(n, J, q, q_star, c, ThresholdRule::practical);
    const double rel = std::sqrt(2.0 * std::log(1024.0))
                     / (2.0 * std::sqrt(std::exp(1.0)) * std::log(1024.0));
    for (int j = q_star + 1; j <= q; ++j)
        CHECK(delp[j] / del[j] == doctest::Approx(rel).epsilon(1e-12));
}

TEST_CASE("coefficient_variance ratios") {
    const FarimaModel m{0.2, 1.0};
    const auto t = cascade_evaluate(find_basis("s4"), 12);
    const auto c = basis_constants(find_basis("s4"), t, m);
    const double v0 = coefficient_variance(2, 0, 4096, c);
    const double v1 = coefficient_variance(3, 0, 4096, c);
    CHECK(v1 / v0 == doctest::Approx(std::pow(2.0, -(1.0 - c.alpha))).epsilon(1e-12));
}

TEST_CASE("theoretical_mise: n-scaling structure and tie equality") {
    const FarimaModel m{0.2, 1.0};
    const auto t = cascade_evaluate(find_basis("s4"), 12);
    const auto c = basis_constants(find_basis("s4"), t, m);
    TrendSmoothness s{2, 50.0 * std::pow(4.0 * 3.14159265358979323846, 4.0), 0.0, 0.0, 1.0};
    s.max_gr_sq = 2.0 * s.integral_gr_sq;
    const double m1 = theoretical_mise(1024, Regime::case_ii, c, s);
    const double m4 = theoretical_mise(4096, Regime::case_ii, c, s);
    // ratio = 4^{2 r a/(2r+a)} up to the envelope factor re-evaluated at 4n
    const double p = 2.0 * c.r * c.alpha / (2.0 * c.r + c.alpha);
    auto env = [&](std::size_t n) {
        const double D = delta_n(BasisKind::father, n, c, s);
        return std::pow(2.0, 2.0 * c.r * D) / (std::pow(2.0, 2.0 * c.r) - 1.0)
             + std::pow(2.0, c.alpha * (1.0 - D)) / (std::pow(2.0, c.alpha) - 1.0);
    };
    CHECK(m1 / m4 == doctest::Approx(std::pow(4.0, p) * env(1024) / env(4096)).epsilon(1e-12));
    // spot value under the exact first-principles constants
    CHECK(m1 == doctest::Approx(0.1558130798).epsilon(1e-6));
    // tie makes both regime formulas coincide
    CHECK(theoretical_mise(1024, Regime::case_i, c, s) == doctest::Approx(m1).epsilon(1e-10));
}

TEST_CASE("plan: case-ii default under tie, guards, thresholds attached") {
    const FarimaModel m{0.2, 1.0};
    const auto t = cascade_evaluate(find_basis("s4"), 12);
    const auto c = basis_constants(find_basis("s4"), t, m);
    TrendSmoothness s{2, 50.0 * std::pow(4.0 * 3.14159265358979323846, 4.0), 0.0, 0.0, 1.0};
    const auto plan = make_plan(2048, c, s, {});
    CHECK(plan.regime == Regime::case_ii);
    CHECK(plan.regime_tie);
    CHECK(plan.J == 4);
    CHECK(plan.q == 11 - plan.J);
    CHECK(plan.q_star == -1);
    CHECK(plan.thresholds.size() == static_cast<std::size_t>(plan.q + 1));
    for (double d : plan.thresholds) CHECK(d > 0.0);
    // forced case-i honors the 2^J = o(n^{a/(2r+a)}) guard
    PlanOptions opt;
    opt.force_regime = Regime::case_i;
    opt.force_J = 5;
    CHECK_THROWS_AS(make_plan(2048, c, s, opt), ConfigError);
    opt.force_J = 0;
    const auto plan_i = make_plan(2048, c, s, opt);
    CHECK(plan_i.J == 0);
    CHECK(plan_i.q_star >= 0);
    for (int j = 0; j <= plan_i.q_star; ++j) CHECK(plan_i.thresholds[j] == 0.0);
}

}  // TEST_SUITE
