#pragma once

// Independent test oracles: brute-force quadrature, covariance double sums,
// closed forms.  These deliberately avoid the library's coefficient and
// constant evaluation paths.

#include <functional>

#include "wavetrend/estimator.hpp"

namespace oracles {

using wavetrend::BasisKind;
using wavetrend::DyadicTable;
using wavetrend::FarimaModel;

// Quadrature coefficient  int_0^1 g(t) w_{level,k}(t) dt  (Simpson per table cell,
// exact for the table's piecewise-linear basis interpolant).
double quad_coefficient(const DyadicTable& table, BasisKind kind, int level, long k,
                        const std::function<double(double)>& g);

// Same, with the basis handled exactly and g linearized over super-cells:
// cheap enough for deep levels.
double quad_coefficient_fast(const DyadicTable& table, BasisKind kind, int level, long k,
                             const std::function<double(double)>& g, int supercells = 256);

// Riemann-sum expectation  (1/n) sum_i g(t_i) w_{level,k}(t_i).
double riemann_expectation(const DyadicTable& table, BasisKind kind, int level, long k,
                           const std::function<double(double)>& g, std::size_t n);

// Exact variance of the Riemann coefficient under the FARIMA model
// (covariance double sum over the design points in the support).
double riemann_variance(const DyadicTable& table, BasisKind kind, int level, long k,
                        const FarimaModel& model, std::size_t n);

// sum_k d_{level,k}^2 by quadrature.
double level_energy(const DyadicTable& table, int level,
                    const std::function<double(double)>& g);

// Tail sum over levels J+q+1 .. J+q+depth (plus geometric closure).
double brute_tail(const DyadicTable& table, int J, int q,
                  const std::function<double(double)>& g, int depth = 12);

// Exact finite-n MISE of the no-threshold linear estimator at (J, q):
// bias^2 by quadrature, variance by covariance double sums, quadrature tail.
double brute_linear_mise(const DyadicTable& table, const FarimaModel& model, std::size_t n,
                         int J, int q, const std::function<double(double)>& g);

// Spectral oracle for the autocovariance: int_{-pi}^{pi} f(l) cos(k l) dl with
// f(l) = sigma^2 (2 pi)^{-1} |2 sin(l/2)|^{-2d}, singularity removed by substitution.
double spectral_autocov(const FarimaModel& model, long lag);

// Closed-form Haar values of the raw singular integrals on [0,1]^2.
double haar_father_singular(double alpha);
double haar_mother_singular(double alpha);

}  // namespace oracles
