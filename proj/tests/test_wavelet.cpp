#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "wavetrend/wavelet.hpp"

using namespace wavetrend;

namespace {
double haar_psi(double x) {
    if (x < 0.0 || x >= 1.0) return 0.0;
    return x < 0.5 ? 1.0 : -1.0;
}
}  // namespace

TEST_SUITE("wavelet_basis") {

TEST_CASE("registry carries the five bases with valid filters") {
    for (const auto& name : {"haar", "s4", "s6", "s8", "s10"}) {
        const auto& spec = find_basis(name);
        CHECK_NOTHROW(spec.validate());
        double s = 0.0;
        for (double c : spec.filter) s += c;
        CHECK(std::abs(s - 2.0) < 1e-12);
        if (spec.family == "haar") CHECK(spec.support() == 1);
        else CHECK(spec.support() == 2 * spec.vanishing_moments - 1);
        CHECK(spec.vanishing_moments >= 1);
    }
    CHECK_THROWS_AS(find_basis("s12"), InvalidSpecError);
}

TEST_CASE("haar table at M=8 matches the closed form") {
    const auto t = cascade_evaluate(find_basis("haar"), 8);
    // phi = 1 on [0,1); psi = +1 on [0,1/2), -1 on [1/2,1); endpoints follow
    // the psi(0) = psi(N) = 0 convention of the basis conditions
    for (std::size_t i = 0; i < t.phi.size() - 1; ++i) CHECK(t.phi[i] == 1.0);
    for (std::size_t c = 0; c < t.cells(); ++c) {
        const double mid = (static_cast<double>(c) + 0.5) * t.cell_width();
        CHECK(t.phi_mid[c] == 1.0);
        CHECK(t.psi_mid[c] == haar_psi(mid));
    }
    CHECK(t.psi.front() == 0.0);
    CHECK(t.psi.back() == 0.0);
    for (std::size_t i = 1; i < t.psi.size() - 1; ++i) {
        const double x = static_cast<double>(i) * t.cell_width();
        CHECK(t.psi[i] == (x < 0.5 ? 1.0 : -1.0));
    }
}

TEST_CASE("unit integrals and norms within tol(M)") {
    for (const auto& name : {"haar", "s4", "s6", "s8", "s10"}) {
        const auto t = cascade_evaluate(find_basis(name), 12);
        const double tol = t.tolerance();
        CHECK(std::abs(moment(t, BasisKind::father, 0) - 1.0) < tol);
        CHECK(std::abs(t.integrate_phi([&](double x) { return t.eval_phi(x); }) - 1.0) < tol);
        CHECK(std::abs(t.integrate_psi([&](double x) { return t.eval_psi(x); }) - 1.0) < tol);
        CHECK(t.psi.front() == 0.0);
        CHECK(t.psi.back() == 0.0);
    }
}

TEST_CASE("s4 refinement residual small and decreasing in M") {
    const auto& spec = find_basis("s4");
    double prev = 1e9;
    for (int M : {6, 8, 10}) {
        const auto t = cascade_evaluate(spec, M);
        const double res = refinement_residual(spec, t);
        CHECK(res < prev);
        prev = res;
    }
    // grid values themselves satisfy the two-scale equation to rounding
    const auto t = cascade_evaluate(spec, 10);
    double worst = 0.0;
    const auto& h = spec.filter;
    for (std::size_t i = 0; i < t.phi.size(); ++i) {
        const double x = static_cast<double>(i) * t.cell_width();
        double rhs = 0.0;
        for (std::size_t m = 0; m < h.size(); ++m) {
            const double arg = 2.0 * x - static_cast<double>(m);
            const long idx = std::lround(arg / t.cell_width());
            if (idx >= 0 && idx < static_cast<long>(t.phi.size()) && std::abs(arg - idx * t.cell_width()) < 1e-12)
                rhs += h[m] * t.phi[idx];
        }
        worst = std::max(worst, std::abs(t.phi[i] - rhs));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("s4 integral of phi equals one to 1e-6 at M=10") {
    const auto t = cascade_evaluate(find_basis("s4"), 10);
    CHECK(std::abs(moment(t, BasisKind::father, 0) - 1.0) < 1e-6);
}

TEST_CASE("partition of unity at interior points") {
    for (const auto& name : {"s4", "s6"}) {
        const auto t = cascade_evaluate(find_basis(name), 12);
        for (double x : {0.31, 0.5, 0.77, 1.43}) {
            double s = 0.0;
            for (long k = -t.support; k <= t.support + 2; ++k)
                s += t.eval_phi(x - static_cast<double>(k));
            CHECK(std::abs(s - 1.0) < t.tolerance());
        }
    }
}

TEST_CASE("eval_scaled basics and Haar closed form") {
    const auto t = cascade_evaluate(find_basis("haar"), 10);
    CHECK(eval_scaled(t, BasisKind::father, 0, 0, 0.3) == doctest::Approx(1.0));
    CHECK(eval_scaled(t, BasisKind::mother, 1, 0, 0.1)
          == doctest::Approx(std::sqrt(2.0)));  // sqrt2 * psi(0.2)
    CHECK(eval_scaled(t, BasisKind::mother, 3, 5, 0.9) == 0.0);  // off support
    CHECK_THROWS_AS(eval_scaled(t, BasisKind::father, 2, -4, 0.5), std::out_of_range);
    CHECK_THROWS_AS(eval_scaled(t, BasisKind::father, 2, 4, 0.5), std::out_of_range);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int level = static_cast<int>(rng() % 6);
        const long k = static_cast<long>(rng() % (1UL << level));
        const double x = unif(rng);
        const double expect = std::pow(2.0, level / 2.0) * haar_psi(std::ldexp(x, level) - k);
        const double got = eval_scaled(t, BasisKind::mother, level, k, x);
        // grid-aligned jumps make the interpolant exact except within one cell
        const double arg = std::ldexp(x, level) - k;
        const bool near_jump = std::abs(arg - 0.5) < t.cell_width() || arg < t.cell_width()
                            || arg > 1.0 - t.cell_width();
        if (!near_jump) CHECK(got == doctest::Approx(expect));
    }
}

TEST_CASE("moments: vanishing orders and nu_r") {
    const auto haar = cascade_evaluate(find_basis("haar"), 12);
    CHECK(std::abs(moment(haar, BasisKind::mother, 0)) < 1e-10);
    CHECK(moment(haar, BasisKind::mother, 1) == doctest::Approx(-0.25));

    for (const auto& name : {"s4", "s6", "s8", "s10"}) {
        const auto& spec = find_basis(name);
        const auto t = cascade_evaluate(spec, 12);
        for (int order = 0; order < spec.vanishing_moments; ++order)
            CHECK(std::abs(moment(t, BasisKind::mother, order)) < t.tolerance());
        CHECK(std::abs(moment(t, BasisKind::mother, spec.vanishing_moments))
              > 10.0 * t.tolerance());
    }
    // frozen high-precision values of nu_r (reflection flips odd-moment signs)
    const auto s4 = cascade_evaluate(find_basis("s4"), 12);
    CHECK(std::abs(std::abs(moment(s4, BasisKind::mother, 2)) - 0.2165063509461097) < 2e-5);
}

TEST_CASE("orthonormality of scaled family by grid quadrature") {
    const auto t = cascade_evaluate(find_basis("s4"), 12);
    std::mt19937_64 rng(7);
    const int G = 1 << 14;
    auto inner = [&](int l1, long k1, int l2, long k2) {
        double acc = 0.0;
        for (int i = 0; i < G; ++i) {
            const double x = (i + 0.5) / G;
            acc += eval_scaled(t, BasisKind::mother, l1, k1, x)
                 * eval_scaled(t, BasisKind::mother, l2, k2, x);
        }
        return acc / G;
    };
    int checked = 0;
    while (checked < 12) {
        const int l1 = 2 + static_cast<int>(rng() % 2), l2 = 2 + static_cast<int>(rng() % 3);
        const long m1 = 3 * (1L << l1) - 1, m2 = 3 * (1L << l2) - 1;
        const long k1 = static_cast<long>(rng() % m1), k2 = static_cast<long>(rng() % m2);
        if (l1 == l2 && k1 == k2) continue;
        // both supports inside [0,1]
        if ((k1 + 3.0) / (3.0 * (1 << l1)) > 1.0 || (k2 + 3.0) / (3.0 * (1 << l2)) > 1.0) continue;
        CHECK(std::abs(inner(l1, k1, l2, k2)) < t.tolerance());
        ++checked;
    }
    // unit norm of one member
    CHECK(std::abs(inner(2, 3, 2, 3) - 1.0) < t.tolerance());
}

TEST_CASE("invalid filters rejected") {
    WaveletSpec bad{"bad", 1, {0.9, 1.1}};
    CHECK_THROWS_AS(cascade_evaluate(bad, 8), InvalidSpecError);  // orthogonality fails
    WaveletSpec bad2{"bad2", 1, {1.2, 1.2}};
    CHECK_THROWS_AS(bad2.validate(), InvalidSpecError);  // sum != 2
    CHECK_THROWS_AS(cascade_evaluate(find_basis("s4"), 4), InvalidSpecError);  // M too small
}

TEST_CASE("filter import from a column file") {
    const auto& s4 = find_basis("s4");
    const std::string path = "s4_filter.txt";
    {
        std::ofstream out(path);
        out.precision(17);
        for (double c : s4.filter) out << c << "\n";
    }
    const auto spec = load_filter_file(path, "s4-file", 2);
    CHECK(spec.support() == 3);
    const auto t0 = cascade_evaluate(s4, 8);
    const auto t1 = cascade_evaluate(spec, 8);
    for (std::size_t i = 0; i < t0.phi.size(); ++i)
        CHECK(t0.phi[i] == doctest::Approx(t1.phi[i]));
    std::remove(path.c_str());
}

}  // TEST_SUITE
