#include "wavetrend/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace wavetrend {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double beta_of_d(double d) {
    if (!(d > 0.0 && d < 0.5)) throw std::domain_error("beta(d) needs d in (0, 1/2)");
    return std::pow(2.0, 2.0 * d) * std::tgamma(1.0 - 2.0 * d) * std::sin(kPi * d)
         / (d * (2.0 * d + 1.0));
}

double optimal_bandwidth(std::size_t n, double d, double c_f, double integral_g2_sq) {
    if (!(integral_g2_sq > 0.0)) throw std::domain_error("I(g'') must be positive");
    const double c_opt = std::pow(9.0 * (1.0 - 2.0 * d) * beta_of_d(d) * c_f / integral_g2_sq,
                                  1.0 / (5.0 - 2.0 * d));
    const double b = c_opt * std::pow(static_cast<double>(n), (2.0 * d - 1.0) / (5.0 - 2.0 * d));
    return std::clamp(b, 1e-12, 0.5);
}

KernelPlan make_kernel_plan(std::size_t n, const FarimaModel& model, double integral_g2_sq) {
    KernelPlan plan;
    plan.d = model.d;
    plan.c_f = model.c_f();
    plan.integral_g2_sq = integral_g2_sq;
    plan.bandwidth = optimal_bandwidth(n, model.d, plan.c_f, integral_g2_sq);
    return plan;
}

KernelEstimate kernel_estimate(const Sample& sample, const KernelPlan& plan,
                               std::size_t grid_points) {
    sample.check();
    const long n = static_cast<long>(sample.n());
    const double nd = static_cast<double>(n);
    const double b = plan.bandwidth;
    // prefix sums make the rectangular-kernel average O(1) per evaluation point
    std::vector<double> pre(n + 1, 0.0);
    for (long i = 0; i < n; ++i) pre[i + 1] = pre[i] + sample.y[i];
    KernelEstimate est;
    est.grid.resize(grid_points + 1);
    est.values.resize(grid_points + 1);
    for (std::size_t gi = 0; gi <= grid_points; ++gi) {
        const double t = static_cast<double>(gi) / static_cast<double>(grid_points);
        est.grid[gi] = t;
        // |t - t_i| <= b  <=>  i in [n(t-b), n(t+b)]
        long lo = static_cast<long>(std::ceil((t - b) * nd));
        long hi = static_cast<long>(std::floor((t + b) * nd));
        lo = std::max(lo, 1L);
        hi = std::min(hi, n);
        if (hi < lo) {  // degenerate bandwidth: nearest point
            const long i = std::clamp(static_cast<long>(std::llround(t * nd)), 1L, n);
            est.values[gi] = sample.y[i - 1];
            continue;
        }
        est.values[gi] = (pre[hi] - pre[lo - 1]) / static_cast<double>(hi - lo + 1);
    }
    return est;
}

TrendEstimate soft_threshold_estimate(const Sample& sample, const LrdBasisConstants& constants,
                                      const DyadicTable& table, int J, int q,
                                      CoefficientMethod method, std::size_t grid_factor) {
    auto coeffs = (method == CoefficientMethod::riemann)
                      ? empirical_coefficients(sample, table, J, q)
                      : interp_coefficients(sample, table, J, q);
    const double lam = std::sqrt(2.0 * std::log(static_cast<double>(sample.n())));
    std::vector<double> zeros(q >= 0 ? q + 1 : 0, 0.0);
    for (int j = 0; j <= q; ++j) {
        const double scale = lam * std::sqrt(coefficient_variance(j, J, sample.n(), constants));
        for (auto& dv : coeffs.d_hat[j]) {
            const double mag = std::abs(dv) - scale;
            dv = mag > 0.0 ? (dv > 0.0 ? mag : -mag) : 0.0;
        }
    }
    auto est = reconstruct(coeffs, zeros, table, grid_factor * sample.n());
    est.plan.J = J;
    est.plan.q = q;
    est.plan.q_star = -1;
    return est;
}

}  // namespace wavetrend
