#pragma once

#include <functional>
#include <vector>

#include "wavetrend/constants.hpp"
#include "wavetrend/noise.hpp"
#include "wavetrend/trends.hpp"
#include "wavetrend/wavelet.hpp"

namespace wavetrend {

// Observations Y_i = g(t_i) + xi_i at the design t_i = i/n.
struct Sample {
    std::vector<double> y;
    std::size_t n() const { return y.size(); }
    void check() const {
        if (y.size() < 4) throw ConfigError("sample needs at least 4 points");
        for (double v : y)
            if (!std::isfinite(v)) throw ConfigError("sample contains non-finite values");
    }
};

// Wavelet coefficients of a sample: one father level J, detail levels J..J+q.
// Shift index k runs over -N+1 .. N*2^{level}-1; storage offset is N-1.
struct CoefficientSet {
    int J = 0;
    int q = -1;
    int support = 1;
    std::vector<double> s_hat;               // father coefficients
    std::vector<std::vector<double>> d_hat;  // [j][k+N-1], j = 0..q
    std::vector<std::vector<char>> kept;     // post-threshold survival flags

    long detail_count(int j) const { return static_cast<long>(d_hat[j].size()); }
    double& s(long k) { return s_hat[k + support - 1]; }
    double& d(int j, long k) { return d_hat[j][k + support - 1]; }
    double s(long k) const { return s_hat[k + support - 1]; }
    double d(int j, long k) const { return d_hat[j][k + support - 1]; }
};

enum class CoefficientMethod {
    riemann,  // (1/n) sum Y_i w(t_i): the defining Riemann sums
    interp,   // exact integral of the piecewise-linear data interpolant
};

// Defining Riemann-sum coefficients (1/n) sum_i Y_i w_{level,k}(t_i); only
// design points inside the scaled support contribute.
CoefficientSet empirical_coefficients(const Sample& sample, const DyadicTable& table,
                                      int J, int q);

// Alias-free analysis: the same functionals evaluated exactly against the
// piecewise-linear interpolant of the data (constant on [0, 1/n]).  At coarse
// levels this coincides with the Riemann sums to O(n^{-2}); at fine levels it
// keeps smooth trends out of the detail coefficients.
CoefficientSet interp_coefficients(const Sample& sample, const DyadicTable& table,
                                   int J, int q);

// Evaluator for a reconstruction; values cached on the dyadic grid i/(grid_factor*n).
struct TrendEstimate {
    EstimatorPlan plan;
    CoefficientSet coeffs;
    const DyadicTable* table = nullptr;
    std::vector<double> grid;    // evaluation abscissae
    std::vector<double> values;  // ghat on the grid

    double operator()(double t) const;  // exact double-sum evaluation at any t
};

// Hard-threshold reconstruction ghat = sum s phi + sum d I(|d|>delta_j) psi.
TrendEstimate reconstruct(const CoefficientSet& coeffs, const std::vector<double>& deltas,
                          const DyadicTable& table, std::size_t grid_points);

// Leading-order detail coefficient of a smooth trend (the local expansion that
// drives the bias analysis); test oracle against exact quadrature.
double asymptotic_detail(const TrendFunction& trend, int j, long k, int J,
                         const LrdBasisConstants& constants);

struct EstimateOptions {
    CoefficientMethod method = CoefficientMethod::interp;
    PlanOptions plan;
    std::size_t grid_factor = 4;  // evaluation grid is grid_factor * n + 1 points
};

// The full adaptive estimator: regime, plan, thresholds, reconstruction.
TrendEstimate adaptive_estimate(const Sample& sample, const FarimaModel& model,
                                const LrdBasisConstants& constants,
                                const TrendSmoothness& smooth, const DyadicTable& table,
                                const EstimateOptions& options = {});

// Trapezoid integral of (ghat - g)^2 on the estimate's grid (>= 4n points).
double empirical_mise(const TrendEstimate& estimate, const std::function<double(double)>& truth);

// Leading-order truncation energy sum_{j>q} sum_k d_jk^2 (the tail term of the
// error decomposition); test oracle against brute-force tail sums.
double tail_energy(const TrendSmoothness& smooth, int J, int q,
                   const LrdBasisConstants& constants);

}  // namespace wavetrend
