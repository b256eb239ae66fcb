#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wavetrend/constants.hpp"

namespace wavetrend {

// A test trend on [0,1] with analytic (piecewise) derivatives up to order 3
// and closed-form or quadrature smoothness functionals.
struct TrendFunction {
    std::string name;
    std::function<double(double)> g;
    std::function<double(int, double)> deriv;                    // r in 1..3
    std::function<double(int, double, double)> integral_gr_sq;   // int_a^b (g^{(r)})^2
    std::vector<double> jumps;           // discontinuity locations of g itself
    std::vector<double> kinks;           // locations excluded from derivative checks
    double default_lower = 0.0;
    double default_upper = 1.0;
    bool divergent_full_smoothness = false;  // int_0^1 (g'')^2 = infinity (Doppler)

    double operator()(double t) const { return g(t); }
    TrendSmoothness smoothness(int r) const {
        return smoothness(r, default_lower, default_upper);
    }
    TrendSmoothness smoothness(int r, double a, double b) const;
};

TrendFunction make_sine();
TrendFunction make_jumpsine(double jump_size);
TrendFunction make_sharp();
TrendFunction make_doppler();

// Lookup by name: "sine", "jumpsine" (uses jump_size), "sharp", "doppler".
TrendFunction find_trend(const std::string& name, double jump_size = 1.0);
std::vector<std::string> trend_names();

// Smoothness functionals over [0.1, 0.95] for trends whose full-interval
// integral diverges; identity for everything else.
TrendSmoothness doppler_cstar_override(const TrendFunction& trend, int r);

// Adaptive Simpson quadrature (shared with tests).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 28);

}  // namespace wavetrend
