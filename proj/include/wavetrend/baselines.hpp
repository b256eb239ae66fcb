#pragma once

#include "wavetrend/estimator.hpp"

namespace wavetrend {

// Optimal-bandwidth kernel smoothing with the rectangular kernel.
struct KernelPlan {
    double d = 0.2;
    double c_f = 0.0;
    double integral_g2_sq = 0.0;  // int (g'')^2
    double bandwidth = 0.0;       // in (0, 1/2]
};

// beta(d) = 2^{2d} Gamma(1-2d) sin(pi d) / (d (2d+1)).
double beta_of_d(double d);

// b_opt = C_opt n^{(2d-1)/(5-2d)}, C_opt = (9 (1-2d) beta(d) C_f / I(g''))^{1/(5-2d)};
// clamped to (0, 1/2].
double optimal_bandwidth(std::size_t n, double d, double c_f, double integral_g2_sq);

KernelPlan make_kernel_plan(std::size_t n, const FarimaModel& model, double integral_g2_sq);

// Moving-average estimate ghat(t) = sum_i w_i Y_i with rectangular-kernel weights
// renormalized to sum to one inside [0, 1]; evaluated on grid_points + 1 abscissae.
struct KernelEstimate {
    std::vector<double> grid;
    std::vector<double> values;
};
KernelEstimate kernel_estimate(const Sample& sample, const KernelPlan& plan,
                               std::size_t grid_points);

// Soft-threshold wavelet baseline: sign(d)(|d| - lambda_j) I(|d| > lambda_j) on all
// detail levels with lambda_j = sigma_j sqrt(2 log n); father coefficients untouched.
TrendEstimate soft_threshold_estimate(const Sample& sample, const LrdBasisConstants& constants,
                                      const DyadicTable& table, int J, int q,
                                      CoefficientMethod method = CoefficientMethod::interp,
                                      std::size_t grid_factor = 4);

}  // namespace wavetrend
