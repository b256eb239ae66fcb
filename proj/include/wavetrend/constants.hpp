#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "wavetrend/noise.hpp"
#include "wavetrend/wavelet.hpp"

namespace wavetrend {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (2^alpha - 1) C_phi^2 == C_psi^2 exactly for every conjugate-quadrature pair,
// so the regime comparison of the theory is a tie for all registered bases.
struct RegimeTieError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constants of the basis under the long-memory kernel |x-y|^{-alpha}.
struct LrdBasisConstants {
    double alpha = 0.0;
    double c_phi_sq = 0.0;   // C_gamma * int int |x-y|^{-a} phi phi
    double c_psi_sq = 0.0;   // C_gamma * int int |x-y|^{-a} psi psi
    double nu_r = 0.0;       // int t^r psi(t) dt
    int r = 0;               // vanishing moments of the basis
    int support = 1;         // N
};

// Smoothness functionals of the trend used by the adaptive rules.
struct TrendSmoothness {
    int r = 0;
    double integral_gr_sq = 0.0;  // int_a^b (g^{(r)})^2
    double max_gr_sq = 0.0;       // max_t (g^{(r)})^2
    double lower = 0.0;           // [a, b], default [0, 1]
    double upper = 1.0;
};

enum class Regime { case_i, case_ii };
enum class ThresholdRule {
    theorem,    // delta_j^2 = 4 e C_psi^2 N^{a-1} (ln n)^2 / (n^a 2^{(J+j)(1-a)})
    practical,  // delta_j = sigma_j sqrt(2 ln n): the scale the simulations realize
};

struct EstimatorPlan {
    Regime regime = Regime::case_ii;
    bool regime_tie = false;  // constants were an exact tie; case_ii chosen
    int J = 0;
    int q = -1;               // -1 encodes a father-only estimator
    int q_star = -1;
    ThresholdRule rule = ThresholdRule::practical;
    std::vector<double> thresholds;  // delta_j, j = 0..q
};

// int int_{[0,N]^2} |x-y|^{-alpha} w(x) w(y) dx dy with w piecewise constant on
// the table's dyadic cells and the singular kernel integrated in closed form
// per cell pair.  (Raw integral: multiply by C_gamma for C_phi^2 / C_psi^2.)
double singular_product_integral(const DyadicTable& table, BasisKind kind, double alpha);

// Same integral evaluated exactly through the refinement relation of the
// autocorrelation function (linear system over integer-shift kernel moments).
double singular_product_exact(const WaveletSpec& spec, BasisKind kind, double alpha);

// Builder: constants for (basis, noise model).  The exact route is the default;
// cell_resolution selects the grid method instead when >= 6.
LrdBasisConstants basis_constants(const WaveletSpec& spec, const DyadicTable& table,
                                  const FarimaModel& model, int cell_resolution = 0);

// C*(r, alpha, psi, g^{(r)}) or the phi variant with C_phi^2 (2^alpha - 1).
double c_star(BasisKind kind, const LrdBasisConstants& constants, const TrendSmoothness& smooth);

// Remark-style decomposition (C1*+C2*+C3*)/(2r+alpha) + C4*, phi variant.
struct CStarParts {
    double c1, c2, c3, c4;
    double total(double two_r_plus_alpha) const { return (c1 + c2 + c3) / two_r_plus_alpha + c4; }
};
CStarParts c_star_parts(const LrdBasisConstants& constants, const TrendSmoothness& smooth);

// Fractional part of (alpha/(2r+alpha)) log2 n + C*; in [0, 1).
double delta_n(BasisKind kind, std::size_t n, const LrdBasisConstants& constants,
               const TrendSmoothness& smooth);

// Strict comparison (2^alpha - 1) C_phi^2 vs C_psi^2; ties raise RegimeTieError.
Regime regime(const LrdBasisConstants& constants);

// Optimal smoothing parameter (case i):  q* = floor(x_psi) - J, error if negative.
// When Delta_n = 0 both q* and q*-1 minimize; the larger one is returned first.
struct OptimalChoice {
    int value;
    std::optional<int> co_optimal;
};
OptimalChoice optimal_q(std::size_t n, int J, const LrdBasisConstants& constants,
                        const TrendSmoothness& smooth);

// Optimal decomposition level (case ii):  J* = floor(x_phi) + 1, error if negative.
OptimalChoice optimal_J(std::size_t n, const LrdBasisConstants& constants,
                        const TrendSmoothness& smooth);

// Noise scale of a detail coefficient at offset j above J (leading order).
double coefficient_variance(int j, int J, std::size_t n, const LrdBasisConstants& constants);

// Threshold array delta_0..delta_q; zero for j <= q_star.
std::vector<double> thresholds(std::size_t n, int J, int q, int q_star,
                               const LrdBasisConstants& constants,
                               ThresholdRule rule = ThresholdRule::theorem);

// Leading-order MISE of the selected regime (Theorems on the optimal rate).
double theoretical_mise(std::size_t n, Regime reg, const LrdBasisConstants& constants,
                        const TrendSmoothness& smooth);

struct PlanOptions {
    std::optional<int> force_J;          // case-i decomposition level override
    ThresholdRule rule = ThresholdRule::practical;
    std::optional<Regime> force_regime;  // bypass the tie error explicitly
};

// Resolve the full adaptive plan for (n, basis constants, trend smoothness).
// Exact regime ties resolve to case_ii (the configuration the simulations use).
EstimatorPlan make_plan(std::size_t n, const LrdBasisConstants& constants,
                        const TrendSmoothness& smooth, const PlanOptions& options = {});

}  // namespace wavetrend
