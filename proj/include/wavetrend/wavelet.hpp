#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavetrend {

struct InvalidSpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A compactly supported orthonormal scaling/wavelet pair, described by its
// two-scale filter h (normalized so that sum h_k = 2).  Support of both
// phi and psi is [0, N] with N = len(h) - 1.
struct WaveletSpec {
    std::string family;
    int vanishing_moments = 0;       // m_psi; equals the trend order r it pairs with
    std::vector<double> filter;      // refinement coefficients, sum = 2

    int support() const { return static_cast<int>(filter.size()) - 1; }

    // Checks sum-to-2 and double-shift orthogonality; throws InvalidSpecError.
    void validate() const;

    // High-pass filter by alternating flip: g_k = (-1)^k h_{L-1-k}.
    std::vector<double> wavelet_filter() const;
};

// Values of phi and psi on the dyadic grid k/2^M in [0, N], computed exactly
// from the refinement equation (integer values from the transfer eigenproblem,
// then dyadic refinement).  Midpoint samples carry the quadrature.
class DyadicTable {
public:
    int resolution = 0;              // M
    int support = 1;                 // N
    int vanishing_moments = 1;
    std::vector<double> phi;         // values at k/2^M, k = 0..N*2^M
    std::vector<double> psi;
    std::vector<double> phi_mid;     // values at (k+1/2)/2^M, k = 0..N*2^M-1
    std::vector<double> psi_mid;
    std::vector<double> quadrature_weights;  // composite midpoint rule, one per cell

    double cell_width() const { return 1.0 / static_cast<double>(1 << resolution); }
    std::size_t cells() const { return phi_mid.size(); }

    // Linear interpolation on [0, N]; zero outside.
    double eval_phi(double x) const { return interp(phi, x); }
    double eval_psi(double x) const { return interp(psi, x); }

    // Midpoint-rule integral of f(x) * w(x) over [0, N], w = phi or psi.
    template <typename F>
    double integrate_phi(F&& f) const {
        return integrate(phi_mid, std::forward<F>(f));
    }
    template <typename F>
    double integrate_psi(F&& f) const {
        return integrate(psi_mid, std::forward<F>(f));
    }

    double tolerance() const;        // tol(M) = 2^{-M/2}

private:
    double interp(const std::vector<double>& tab, double x) const;
    template <typename F>
    double integrate(const std::vector<double>& mid, F&& f) const {
        const double h = cell_width();
        double acc = 0.0;
        for (std::size_t c = 0; c < mid.size(); ++c)
            acc += f((static_cast<double>(c) + 0.5) * h) * mid[c];
        return acc * h;
    }
};

enum class BasisKind { father, mother };

// Evaluate phi and psi on the dyadic grid at resolution M by exact refinement.
// Throws InvalidSpecError if the filter is not a valid orthonormal scaling filter.
DyadicTable cascade_evaluate(const WaveletSpec& spec, int resolution);

// N^{1/2} 2^{level/2} w(N 2^level t - k), linearly interpolated; 0 off support.
// The admissible shift range is -N+1 <= k <= N*2^level - 1.
double eval_scaled(const DyadicTable& table, BasisKind kind, int level, long k, double t);

// Grid-quadrature moment  int_0^N t^order w(t) dt.
double moment(const DyadicTable& table, BasisKind kind, int order);

// Max residual of the two-scale equation measured on the half grid through the
// table's interpolant (shrinks with M; exact grid values have zero residual).
double refinement_residual(const WaveletSpec& spec, const DyadicTable& table);

// Registered bases: "haar", "s4", "s6", "s8", "s10".
const WaveletSpec& find_basis(const std::string& name);
std::vector<std::string> basis_names();

// Plain-text column file of refinement coefficients (one per line).
WaveletSpec load_filter_file(const std::string& path, const std::string& family,
                             int vanishing_moments);

}  // namespace wavetrend
