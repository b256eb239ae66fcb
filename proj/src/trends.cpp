#include "wavetrend/trends.hpp"

#include <cmath>
#include <stdexcept>

namespace wavetrend {

namespace {

constexpr double kPi = 3.14159265358979323846;

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
         + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Central finite difference of order r (spacing h).
double fd_derivative(const std::function<double(double)>& f, int r, double t, double h) {
    switch (r) {
        case 1: return (f(t + h) - f(t - h)) / (2.0 * h);
        case 2: return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
        case 3:
            return (f(t + 2 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2 * h))
                 / (2.0 * h * h * h);
        default: throw std::domain_error("derivative order out of range");
    }
}

// Registration self-check: analytic derivatives and smoothness functionals must
// agree with numerical differentiation/integration away from special points.
void self_check(const TrendFunction& tr) {
    const double fd_tol[4] = {0.0, 2e-5, 2e-4, 2e-3};
    for (int r = 1; r <= 3; ++r) {
        const double h = (r == 3) ? 2e-3 : 1e-4;
        for (double t : {0.137, 0.294, 0.451, 0.733, 0.881}) {
            bool near_special = false;
            for (double s : tr.jumps) near_special |= std::abs(t - s) < 0.02;
            for (double s : tr.kinks) near_special |= std::abs(t - s) < 0.02;
            if (near_special) continue;
            const double exact = tr.deriv(r, t);
            const double fd = fd_derivative(tr.g, r, t, h);
            const double scale = std::max(std::abs(exact), 1.0);
            if (std::abs(exact - fd) > fd_tol[r] * scale * 100.0)
                throw std::logic_error(tr.name + ": derivative oracle fails self-check (r="
                                       + std::to_string(r) + ")");
        }
    }
    const double a = tr.default_lower, b = tr.default_upper;
    const int r = 2;
    const double reg = tr.integral_gr_sq(r, a, b);
    const double num = adaptive_simpson([&](double t) {
        const double d = tr.deriv(r, t);
        return d * d;
    }, a + 1e-9, b - 1e-9, 1e-9 * std::max(reg, 1.0));
    if (std::abs(reg - num) > 1e-4 * std::max(std::abs(reg), 1.0))
        throw std::logic_error(tr.name + ": smoothness functional fails self-check");
}

// int_a^b (A sin(w t + p))^2 dt in closed form.
double sin_sq_integral(double A, double w, double p, double a, double b) {
    auto anti = [&](double t) { return t / 2.0 - std::sin(2.0 * (w * t + p)) / (4.0 * w); };
    return A * A * (anti(b) - anti(a));
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    // a prime number of initial panels keeps periodic integrands off the
    // bisection lattice (dyadic probe points can all hit zeros otherwise)
    const int panels = 13;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        const double m = 0.5 * (pa + pb);
        const double fa = f(pa), fm = f(m), fb = f(pb);
        const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        acc += simpson_rec(f, pa, pb, fa, fm, fb, whole, tol / panels, max_depth);
    }
    return acc;
}

TrendSmoothness TrendFunction::smoothness(int r, double a, double b) const {
    TrendSmoothness s;
    s.r = r;
    s.lower = a;
    s.upper = b;
    s.integral_gr_sq = integral_gr_sq(r, a, b);
    double mx = 0.0;
    const int grid = 4096;
    for (int i = 0; i <= grid; ++i) {
        const double t = a + (b - a) * i / grid;
        bool special = false;
        for (double j : jumps) special |= std::abs(t - j) < 1e-9;
        for (double k : kinks) special |= std::abs(t - k) < 1e-9;
        if (special) continue;
        const double d = deriv(r, t);
        mx = std::max(mx, d * d);
    }
    s.max_gr_sq = mx;
    return s;
}

TrendFunction make_sine() {
    TrendFunction tr;
    tr.name = "sine";
    const double w = 4.0 * kPi;
    tr.g = [w](double t) { return 10.0 * std::sin(w * t); };
    tr.deriv = [w](int r, double t) {
        return 10.0 * std::pow(w, r) * std::sin(w * t + r * kPi / 2.0);
    };
    tr.integral_gr_sq = [w](int r, double a, double b) {
        return sin_sq_integral(10.0 * std::pow(w, r), w, r * kPi / 2.0, a, b);
    };
    self_check(tr);
    return tr;
}

TrendFunction make_jumpsine(double jump_size) {
    TrendFunction tr = make_sine();
    tr.name = "jumpsine";
    const double lo = 5.0 / 8.0, hi = 7.0 / 8.0;
    const double w = 4.0 * kPi;
    tr.g = [w, jump_size, lo, hi](double t) {
        return 10.0 * std::sin(w * t) + ((t > lo && t < hi) ? jump_size : 0.0);
    };
    tr.jumps = {lo, hi};
    // derivatives and smoothness functionals come from the smooth part
    self_check(tr);
    return tr;
}

TrendFunction make_sharp() {
    TrendFunction tr;
    tr.name = "sharp";
    tr.g = [](double t) { return 10.0 * (std::exp(std::min(t, 1.0 - t)) - 1.0); };
    tr.deriv = [](int r, double t) {
        if (t < 0.5) return 10.0 * std::exp(t);
        const double sign = (r % 2 == 1) ? -1.0 : 1.0;
        return sign * 10.0 * std::exp(1.0 - t);
    };
    tr.integral_gr_sq = [](int, double a, double b) {
        // (g^{(r)})^2 = 100 e^{2t} below the kink, 100 e^{2(1-t)} above
        double acc = 0.0;
        if (a < 0.5) {
            const double hi = std::min(b, 0.5);
            acc += 100.0 * (std::exp(2.0 * hi) - std::exp(2.0 * a)) / 2.0;
        }
        if (b > 0.5) {
            const double lo = std::max(a, 0.5);
            acc += 100.0 * (std::exp(2.0 * (1.0 - lo)) - std::exp(2.0 * (1.0 - b))) / 2.0;
        }
        return acc;
    };
    tr.kinks = {0.5};
    self_check(tr);
    return tr;
}

TrendFunction make_doppler() {
    TrendFunction tr;
    tr.name = "doppler";
    const double c = 2.0 * kPi * 1.05;
    auto parts = [c](double t) {
        const double u = std::sqrt(t * (1.0 - t));
        const double up = (1.0 - 2.0 * t) / (2.0 * u);
        const double upp = -1.0 / (4.0 * u * u * u);
        const double uppp = 3.0 * (1.0 - 2.0 * t) / (8.0 * std::pow(u, 5));
        const double s = t + 0.05;
        const double w = c / s;
        const double wp = -c / (s * s);
        const double wpp = 2.0 * c / (s * s * s);
        const double wppp = -6.0 * c / (s * s * s * s);
        const double v = std::sin(w);
        const double vp = std::cos(w) * wp;
        const double vpp = -std::sin(w) * wp * wp + std::cos(w) * wpp;
        const double vppp = -std::cos(w) * wp * wp * wp - 3.0 * std::sin(w) * wp * wpp
                          + std::cos(w) * wppp;
        struct P { double u, up, upp, uppp, v, vp, vpp, vppp; };
        return P{u, up, upp, uppp, v, vp, vpp, vppp};
    };
    tr.g = [c](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return 10.0 * std::sqrt(t * (1.0 - t)) * std::sin(c / (t + 0.05));
    };
    tr.deriv = [parts](int r, double t) {
        const auto p = parts(t);
        switch (r) {
            case 1: return 10.0 * (p.up * p.v + p.u * p.vp);
            case 2: return 10.0 * (p.upp * p.v + 2.0 * p.up * p.vp + p.u * p.vpp);
            case 3:
                return 10.0 * (p.uppp * p.v + 3.0 * p.upp * p.vp + 3.0 * p.up * p.vpp
                               + p.u * p.vppp);
            default: throw std::domain_error("derivative order out of range");
        }
    };
    tr.divergent_full_smoothness = true;
    tr.default_lower = 0.1;
    tr.default_upper = 0.95;
    auto deriv_copy = tr.deriv;
    tr.integral_gr_sq = [deriv_copy](int r, double a, double b) {
        // the full-interval integral diverges at both ends: detect by refining the
        // cutoff and reject instead of returning a cutoff-dependent number
        if (a <= 0.0 || b >= 1.0) {
            double prev = 0.0;
            for (double eps : {1e-2, 1e-3, 1e-4}) {
                const double lo = std::max(a, eps), hi = std::min(b, 1.0 - eps);
                const double val = adaptive_simpson([&](double t) {
                    const double d = deriv_copy(r, t);
                    return d * d;
                }, lo, hi, 1e-6);
                if (prev > 0.0 && val > 1.5 * prev)
                    throw NumericError("doppler smoothness integral diverges on [0,1]");
                prev = val;
            }
            return prev;
        }
        const double val = adaptive_simpson([&](double t) {
            const double d = deriv_copy(r, t);
            return d * d;
        }, a, b, 1e-10);
        return val;
    };
    self_check(tr);
    return tr;
}

TrendFunction find_trend(const std::string& name, double jump_size) {
    if (name == "sine") return make_sine();
    if (name == "jumpsine") return make_jumpsine(jump_size);
    if (name == "sharp") return make_sharp();
    if (name == "doppler") return make_doppler();
    throw ConfigError("unknown trend: " + name);
}

std::vector<std::string> trend_names() { return {"sine", "jumpsine", "sharp", "doppler"}; }

TrendSmoothness doppler_cstar_override(const TrendFunction& trend, int r) {
    if (!trend.divergent_full_smoothness) return trend.smoothness(r, 0.0, 1.0);
    return trend.smoothness(r, 0.1, 0.95);
}

}  // namespace wavetrend
