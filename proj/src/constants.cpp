#include "wavetrend/constants.hpp"

#include <algorithm>
#include <cmath>

#include "wavetrend/fft.hpp"

namespace wavetrend {

namespace {

double kernel_antiderivative2(double u, double alpha) {
    // F2'' = |u|^{-alpha}; F2(u) = |u|^{2-alpha} / ((1-alpha)(2-alpha))
    return std::pow(std::abs(u), 2.0 - alpha) / ((1.0 - alpha) * (2.0 - alpha));
}

// Moments m_p = int t^p phi(t) dt from the filter (m_0 = 1).
std::vector<double> filter_phi_moments(const std::vector<double>& h, int pmax) {
    std::vector<double> mom{1.0};
    auto binom = [](int n, int k) {
        double b = 1.0;
        for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
        return b;
    };
    for (int p = 1; p <= pmax; ++p) {
        double s = 0.0;
        for (int i = 0; i < p; ++i) {
            double Hj = 0.0;
            for (std::size_t k = 0; k < h.size(); ++k)
                Hj += h[k] * std::pow(static_cast<double>(k), p - i);
            s += binom(p, i) * mom[i] * Hj;
        }
        mom.push_back(s / (std::pow(2.0, p + 1) - 2.0));
    }
    return mom;
}

// Autocorrelation mask a_p = (1/2) sum_k c_k c_{k+p}, p = 0..L-1 (symmetric).
std::vector<double> correlation_mask(const std::vector<double>& c) {
    const int L = static_cast<int>(c.size());
    std::vector<double> a(L, 0.0);
    for (int p = 0; p < L; ++p)
        for (int k = 0; k + p < L; ++k) a[p] += 0.5 * c[k] * c[k + p];
    return a;
}

// Solve A x = b by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        if (std::abs(A[col][col]) < 1e-300) throw NumericError("singular system");
        for (int r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (int c2 = col; c2 < n; ++c2) A[r][c2] -= f * A[col][c2];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c2 = r + 1; c2 < n; ++c2) acc -= A[r][c2] * x[c2];
        x[r] = acc / A[r][r];
    }
    return x;
}

// L(m) = int |u+m|^{-alpha} Phi_ac(u) du for m = 0..K, where Phi_ac is the
// scaling-function autocorrelation.  Interior equations come from the two-scale
// relation L(m) = 2^{alpha-1} sum_p a_p L(2m+p); far shifts use the moment
// expansion of the kernel.
std::vector<double> shifted_kernel_moments(const std::vector<double>& h, double alpha, int K) {
    const auto a = correlation_mask(h);
    const int N = static_cast<int>(h.size()) - 1;
    const auto mom = filter_phi_moments(h, 8);
    // moments of the autocorrelation: mu_j = sum_i C(j,i) (-1)^{j-i} m_{j-i} m_i
    std::vector<double> mu(9, 0.0);
    for (int j = 0; j <= 8; ++j) {
        auto binom = [](int n, int k) {
            double b = 1.0;
            for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
            return b;
        };
        for (int i = 0; i <= j; ++i)
            mu[j] += binom(j, i) * ((j - i) % 2 == 0 ? 1.0 : -1.0) * mom[j - i] * mom[i];
    }
    auto tail = [&](long s) {
        const double sd = static_cast<double>(std::labs(s));
        double coeff = 1.0, acc = 0.0;
        for (int j = 0; j <= 8; ++j) {
            acc += coeff * mu[j] / std::pow(sd, j);
            coeff *= (-alpha - j) / (j + 1);  // binom(-alpha, j+1) update
        }
        return std::pow(sd, -alpha) * acc;
    };
    const double fac = std::pow(2.0, alpha - 1.0);
    std::vector<std::vector<double>> A(K + 1, std::vector<double>(K + 1, 0.0));
    std::vector<double> b(K + 1, 0.0);
    for (int m = 0; m <= K; ++m) {
        A[m][m] += 1.0;
        for (int p = -N; p <= N; ++p) {
            const long idx = 2L * m + p;
            const long aidx = std::labs(idx);
            const double w = fac * a[std::abs(p)];
            if (aidx <= K) A[m][aidx] -= w;
            else b[m] += w * tail(aidx);
        }
    }
    return solve_dense(std::move(A), std::move(b));
}

double singular_from_mask(const std::vector<double>& filt, double alpha,
                          const std::vector<double>& L) {
    const auto mask = correlation_mask(filt);
    const double fac = std::pow(2.0, alpha - 1.0);
    double acc = mask[0] * L[0];
    for (std::size_t p = 1; p < mask.size(); ++p) acc += 2.0 * mask[p] * L[p];
    return fac * acc;
}

double log2_of(double x) { return std::log2(x); }

double x_level(BasisKind kind, std::size_t n, const LrdBasisConstants& c,
               const TrendSmoothness& s) {
    const double a = c.alpha;
    return a / (2.0 * c.r + a) * log2_of(static_cast<double>(n)) + c_star(kind, c, s);
}

}  // namespace

double singular_product_integral(const DyadicTable& table, BasisKind kind, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    const auto& w = (kind == BasisKind::father) ? table.phi_mid : table.psi_mid;
    const double h = table.cell_width();
    const auto corr = autocorrelation(w);
    // G(p) = F2((p+1)h) - 2 F2(ph) + F2((p-1)h): exact cell-pair kernel integral
    double total = 0.0;
    const double h2ma = std::pow(h, 2.0 - alpha);
    auto F2 = [&](long p) {
        return p == 0 ? 0.0
                      : std::pow(std::abs(static_cast<double>(p)), 2.0 - alpha)
                            / ((1.0 - alpha) * (2.0 - alpha));
    };
    for (long p = 0; p < static_cast<long>(corr.size()); ++p) {
        const double G = F2(p + 1) - 2.0 * F2(p) + F2(p - 1);
        total += (p == 0 ? 1.0 : 2.0) * corr[p] * G;
    }
    return total * h2ma;
}

double singular_product_exact(const WaveletSpec& spec, BasisKind kind, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    const int K = 192;
    const auto L = shifted_kernel_moments(spec.filter, alpha, K);
    if (kind == BasisKind::father) return L[0];
    return singular_from_mask(spec.wavelet_filter(), alpha, L);
}

LrdBasisConstants basis_constants(const WaveletSpec& spec, const DyadicTable& table,
                                  const FarimaModel& model, int cell_resolution) {
    LrdBasisConstants c;
    c.alpha = model.alpha();
    c.r = spec.vanishing_moments;
    c.support = spec.support();
    const double cg = c_gamma(model);
    if (cell_resolution >= 6) {
        const auto t = (cell_resolution == table.resolution) ? table
                                                             : cascade_evaluate(spec, cell_resolution);
        c.c_phi_sq = cg * singular_product_integral(t, BasisKind::father, c.alpha);
        c.c_psi_sq = cg * singular_product_integral(t, BasisKind::mother, c.alpha);
    } else {
        c.c_phi_sq = cg * singular_product_exact(spec, BasisKind::father, c.alpha);
        c.c_psi_sq = cg * singular_product_exact(spec, BasisKind::mother, c.alpha);
    }
    c.nu_r = moment(table, BasisKind::mother, c.r);
    return c;
}

double c_star(BasisKind kind, const LrdBasisConstants& c, const TrendSmoothness& s) {
    if (c.r != s.r) throw ConfigError("basis and trend smoothness disagree on r");
    if (!(s.integral_gr_sq > 0.0)) throw std::domain_error("int (g^{(r)})^2 must be positive");
    double rfac = 1.0;
    for (int i = 2; i <= c.r; ++i) rfac *= i;
    const double denom = (kind == BasisKind::mother)
                             ? c.c_psi_sq
                             : c.c_phi_sq * (std::pow(2.0, c.alpha) - 1.0);
    const double num = c.nu_r * c.nu_r * s.integral_gr_sq;
    return log2_of(num / (denom * rfac * rfac)) / (2.0 * c.r + c.alpha)
           - log2_of(static_cast<double>(c.support));
}

CStarParts c_star_parts(const LrdBasisConstants& c, const TrendSmoothness& s) {
    double rfac = 1.0;
    for (int i = 2; i <= c.r; ++i) rfac *= i;
    CStarParts p{};
    p.c1 = log2_of(s.integral_gr_sq);
    p.c2 = log2_of(c.nu_r * c.nu_r / (rfac * rfac));
    p.c3 = -log2_of(c.c_phi_sq * (std::pow(2.0, c.alpha) - 1.0));
    p.c4 = -log2_of(static_cast<double>(c.support));
    return p;
}

double delta_n(BasisKind kind, std::size_t n, const LrdBasisConstants& c,
               const TrendSmoothness& s) {
    const double x = x_level(kind, n, c, s);
    return x - std::floor(x);
}

Regime regime(const LrdBasisConstants& c) {
    const double lhs = (std::pow(2.0, c.alpha) - 1.0) * c.c_phi_sq;
    const double rhs = c.c_psi_sq;
    if (std::abs(lhs - rhs) <= 1e-9 * std::max(lhs, rhs))
        throw RegimeTieError("(2^a - 1) C_phi^2 == C_psi^2: regime comparison is a tie");
    return lhs > rhs ? Regime::case_i : Regime::case_ii;
}

OptimalChoice optimal_q(std::size_t n, int J, const LrdBasisConstants& c,
                        const TrendSmoothness& s) {
    const double x = x_level(BasisKind::mother, n, c, s);
    const int q = static_cast<int>(std::floor(x)) - J;
    if (q < 0)
        throw ConfigError("optimal q is negative; choose a smaller decomposition level J");
    OptimalChoice out{q, std::nullopt};
    if (x == std::floor(x)) out.co_optimal = q - 1;
    return out;
}

OptimalChoice optimal_J(std::size_t n, const LrdBasisConstants& c, const TrendSmoothness& s) {
    const double x = x_level(BasisKind::father, n, c, s);
    const int J = static_cast<int>(std::floor(x)) + 1;
    if (J < 0) throw ConfigError("optimal J is negative");
    OptimalChoice out{J, std::nullopt};
    if (x == std::floor(x)) out.co_optimal = J - 1;
    return out;
}

double coefficient_variance(int j, int J, std::size_t n, const LrdBasisConstants& c) {
    const double a = c.alpha;
    return c.c_psi_sq * std::pow(static_cast<double>(c.support), a - 1.0)
           * std::pow(static_cast<double>(n), -a) * std::pow(2.0, -(J + j) * (1.0 - a));
}

std::vector<double> thresholds(std::size_t n, int J, int q, int q_star,
                               const LrdBasisConstants& c, ThresholdRule rule) {
    std::vector<double> out;
    out.reserve(q + 1);
    const double logn = std::log(static_cast<double>(n));
    for (int j = 0; j <= q; ++j) {
        if (j <= q_star) {
            out.push_back(0.0);
            continue;
        }
        const double sigma_sq = coefficient_variance(j, J, n, c);
        const double d2 = (rule == ThresholdRule::theorem)
                              ? 4.0 * std::exp(1.0) * logn * logn * sigma_sq
                              : 2.0 * logn * sigma_sq;
        out.push_back(std::sqrt(d2));
    }
    return out;
}

double theoretical_mise(std::size_t n, Regime reg, const LrdBasisConstants& c,
                        const TrendSmoothness& s) {
    const double a = c.alpha;
    const double r = c.r;
    const double p = 2.0 * r * a / (2.0 * r + a);
    double rfac = 1.0;
    for (int i = 2; i <= c.r; ++i) rfac *= i;
    const double theta = c.nu_r * c.nu_r * s.integral_gr_sq / (rfac * rfac);
    const double A2 = std::pow(theta, a / (2.0 * r + a));
    const BasisKind kind = (reg == Regime::case_i) ? BasisKind::mother : BasisKind::father;
    const double D = delta_n(kind, n, c, s);
    const double scale = (reg == Regime::case_i) ? c.c_psi_sq
                                                 : c.c_phi_sq * (std::pow(2.0, a) - 1.0);
    const double env = std::pow(2.0, 2.0 * r * D) / (std::pow(2.0, 2.0 * r) - 1.0)
                     + std::pow(2.0, a * (1.0 - D)) / (std::pow(2.0, a) - 1.0);
    const double A = env * std::pow(scale, 2.0 * r / (2.0 * r + a));
    return A * A2 * std::pow(static_cast<double>(n), -p);
}

EstimatorPlan make_plan(std::size_t n, const LrdBasisConstants& c, const TrendSmoothness& s,
                        const PlanOptions& options) {
    EstimatorPlan plan;
    plan.rule = options.rule;
    if (options.force_regime) {
        plan.regime = *options.force_regime;
    } else {
        try {
            plan.regime = regime(c);
        } catch (const RegimeTieError&) {
            plan.regime = Regime::case_ii;  // the configuration the paper simulates
            plan.regime_tie = true;
        }
    }
    const int log2n = static_cast<int>(std::floor(log2_of(static_cast<double>(n))));
    if (plan.regime == Regime::case_i) {
        plan.J = options.force_J.value_or(0);
        const double guard = c.alpha / (2.0 * c.r + c.alpha) * log2_of(static_cast<double>(n));
        if (plan.J > guard - 1.0)
            throw ConfigError("decomposition level violates the 2^J = o(n^{a/(2r+a)}) guard");
        plan.q = log2n - plan.J;
        plan.q_star = optimal_q(n, plan.J, c, s).value;
    } else {
        plan.J = optimal_J(n, c, s).value;
        plan.q = log2n - plan.J;
        if (plan.q < 0) throw ConfigError("sample too short for the optimal decomposition level");
        // q* by the case-i formula is <= -1 here: every level is thresholded
        const double x = x_level(BasisKind::mother, n, c, s);
        plan.q_star = std::min(-1, static_cast<int>(std::floor(x)) - plan.J);
    }
    plan.thresholds = thresholds(n, plan.J, plan.q, plan.q_star, c, plan.rule);
    return plan;
}

}  // namespace wavetrend
