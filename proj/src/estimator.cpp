#include "wavetrend/estimator.hpp"

#include <cmath>

namespace wavetrend {

namespace {

// First and second antiderivatives of the table's linear interpolant,
// evaluated exactly (piecewise quadratic / cubic).  P1(x) = int_0^x w~,
// P2(x) = int_0^x P1.  Outside [0, N]: P1 stays constant, P2 continues linearly.
class AntiderivativeTable {
public:
    AntiderivativeTable(const std::vector<double>& values, int support, int resolution)
        : v_(values), N_(support), h_(std::ldexp(1.0, -resolution)) {
        const std::size_t cells = v_.size() - 1;
        p1_.resize(cells + 1);
        p2_.resize(cells + 1);
        p1_[0] = p2_[0] = 0.0;
        for (std::size_t m = 0; m < cells; ++m) {
            const double dv = v_[m + 1] - v_[m];
            p1_[m + 1] = p1_[m] + h_ * (v_[m] + v_[m + 1]) / 2.0;
            p2_[m + 1] = p2_[m] + p1_[m] * h_ + v_[m] * h_ * h_ / 2.0 + dv * h_ * h_ / 6.0;
        }
    }

    double p1(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= N_) return p1_.back();
        const double xi = x / h_;
        auto m = static_cast<std::size_t>(xi);
        if (m >= v_.size() - 1) m = v_.size() - 2;
        const double t = x - static_cast<double>(m) * h_;
        const double dv = v_[m + 1] - v_[m];
        return p1_[m] + v_[m] * t + dv * t * t / (2.0 * h_);
    }

    double p2(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= N_) return p2_.back() + p1_.back() * (x - N_);
        const double xi = x / h_;
        auto m = static_cast<std::size_t>(xi);
        if (m >= v_.size() - 1) m = v_.size() - 2;
        const double t = x - static_cast<double>(m) * h_;
        const double dv = v_[m + 1] - v_[m];
        return p2_[m] + p1_[m] * t + v_[m] * t * t / 2.0 + dv * t * t * t / (6.0 * h_);
    }

private:
    std::vector<double> v_;
    int N_;
    double h_;
    std::vector<double> p1_, p2_;
};

void check_levels(std::size_t n, int J, int q) {
    if (J < 0) throw ConfigError("decomposition level J must be >= 0");
    const int log2n = static_cast<int>(std::floor(std::log2(static_cast<double>(n))));
    if (q > log2n - J)
        throw ConfigError("smoothing parameter q exceeds the available resolution");
}

// One level of Riemann-sum coefficients.
void riemann_level(const Sample& sample, const DyadicTable& table, BasisKind kind, int level,
                   std::vector<double>& out) {
    const auto n = static_cast<double>(sample.n());
    const long N = table.support;
    const double s = static_cast<double>(N) * std::ldexp(1.0, level);
    const double amp = std::sqrt(static_cast<double>(N)) * std::pow(2.0, level / 2.0);
    const long kmax = N * (1L << level) - 1;
    out.assign(kmax + N, 0.0);
    for (long k = -N + 1; k <= kmax; ++k) {
        // support: t in [k/s, (k+N)/s]
        const long ilo = std::max(1L, static_cast<long>(std::ceil(static_cast<double>(k) / s * n)));
        const long ihi = std::min(static_cast<long>(n),
                                  static_cast<long>(std::floor(static_cast<double>(k + N) / s * n)));
        double acc = 0.0;
        for (long i = ilo; i <= ihi; ++i) {
            const double x = s * static_cast<double>(i) / n - static_cast<double>(k);
            const double w = (kind == BasisKind::father) ? table.eval_phi(x) : table.eval_psi(x);
            acc += sample.y[i - 1] * w;
        }
        out[k + N - 1] = acc * amp / n;
    }
}

// One level of exact interpolant coefficients via hat weights:
// int hat_i * w_{lev,k} = (n) [P2(x_{i+1}) - 2 P2(x_i) + P2(x_{i-1})] * amp / s^2.
void interp_level(const Sample& sample, const AntiderivativeTable& at, int support, int level,
                  std::vector<double>& out) {
    const long n = static_cast<long>(sample.n());
    const double nd = static_cast<double>(n);
    const long N = support;
    const double s = static_cast<double>(N) * std::ldexp(1.0, level);
    const double amp = std::sqrt(static_cast<double>(N)) * std::pow(2.0, level / 2.0);
    const double c2 = amp * nd / (s * s);
    const long kmax = N * (1L << level) - 1;
    out.assign(kmax + N, 0.0);
    for (long k = -N + 1; k <= kmax; ++k) {
        const long ilo = std::max(0L, static_cast<long>(std::floor(static_cast<double>(k) * nd / s)) - 1);
        const long ihi = std::min(n, static_cast<long>(std::ceil(static_cast<double>(k + N) * nd / s)) + 1);
        double acc = 0.0;
        double p2m = at.p2(s * static_cast<double>(ilo - 1) / nd - static_cast<double>(k));
        double p2c = at.p2(s * static_cast<double>(ilo) / nd - static_cast<double>(k));
        for (long i = ilo; i <= ihi; ++i) {
            const double p2p = at.p2(s * static_cast<double>(i + 1) / nd - static_cast<double>(k));
            if (i >= 1 && i <= n - 1) {
                acc += c2 * (p2p - 2.0 * p2c + p2m) * sample.y[i - 1];
            }
            p2m = p2c;
            p2c = p2p;
        }
        // phantom node at t = 0 carrying y_1 (constant extension on [0, 1/n])
        if (ilo == 0) {
            const double x0 = -static_cast<double>(k);
            const double x1 = s / nd - static_cast<double>(k);
            const double w0 = -amp / s * at.p1(x0) + c2 * (at.p2(x1) - at.p2(x0));
            acc += w0 * sample.y[0];
        }
        // right hat truncated at t = 1
        if (ihi == n) {
            const double xb = s - static_cast<double>(k);
            const double xa = s * (nd - 1.0) / nd - static_cast<double>(k);
            const double wn = amp / s * at.p1(xb) - c2 * (at.p2(xb) - at.p2(xa));
            acc += wn * sample.y[n - 1];
        }
        out[k + N - 1] = acc;
    }
}

CoefficientSet coefficients_impl(const Sample& sample, const DyadicTable& table, int J, int q,
                                 CoefficientMethod method) {
    sample.check();
    check_levels(sample.n(), J, q);
    CoefficientSet cs;
    cs.J = J;
    cs.q = q;
    cs.support = table.support;
    cs.d_hat.resize(q >= 0 ? q + 1 : 0);
    cs.kept.resize(cs.d_hat.size());
    if (method == CoefficientMethod::riemann) {
        riemann_level(sample, table, BasisKind::father, J, cs.s_hat);
        for (int j = 0; j <= q; ++j)
            riemann_level(sample, table, BasisKind::mother, J + j, cs.d_hat[j]);
    } else {
        const AntiderivativeTable atp(table.phi, table.support, table.resolution);
        const AntiderivativeTable atm(table.psi, table.support, table.resolution);
        interp_level(sample, atp, table.support, J, cs.s_hat);
        for (int j = 0; j <= q; ++j)
            interp_level(sample, atm, table.support, J + j, cs.d_hat[j]);
    }
    for (int j = 0; j <= q; ++j) cs.kept[j].assign(cs.d_hat[j].size(), 1);
    return cs;
}

}  // namespace

CoefficientSet empirical_coefficients(const Sample& sample, const DyadicTable& table,
                                      int J, int q) {
    return coefficients_impl(sample, table, J, q, CoefficientMethod::riemann);
}

CoefficientSet interp_coefficients(const Sample& sample, const DyadicTable& table,
                                   int J, int q) {
    return coefficients_impl(sample, table, J, q, CoefficientMethod::interp);
}

double TrendEstimate::operator()(double t) const {
    const long N = coeffs.support;
    double acc = 0.0;
    {
        const double s = static_cast<double>(N) * std::ldexp(1.0, coeffs.J);
        const double amp = std::sqrt(static_cast<double>(N)) * std::pow(2.0, coeffs.J / 2.0);
        const double x = s * t;
        const long klo = std::max(-N + 1, static_cast<long>(std::ceil(x)) - N);
        const long khi = std::min(N * (1L << coeffs.J) - 1, static_cast<long>(std::floor(x)));
        for (long k = klo; k <= khi; ++k)
            acc += coeffs.s(k) * amp * table->eval_phi(x - static_cast<double>(k));
    }
    for (int j = 0; j <= coeffs.q; ++j) {
        const int lev = coeffs.J + j;
        const double s = static_cast<double>(N) * std::ldexp(1.0, lev);
        const double amp = std::sqrt(static_cast<double>(N)) * std::pow(2.0, lev / 2.0);
        const double x = s * t;
        const long klo = std::max(-N + 1, static_cast<long>(std::ceil(x)) - N);
        const long khi = std::min(N * (1L << lev) - 1, static_cast<long>(std::floor(x)));
        for (long k = klo; k <= khi; ++k)
            if (coeffs.kept[j][k + N - 1])
                acc += coeffs.d(j, k) * amp * table->eval_psi(x - static_cast<double>(k));
    }
    return acc;
}

TrendEstimate reconstruct(const CoefficientSet& coeffs, const std::vector<double>& deltas,
                          const DyadicTable& table, std::size_t grid_points) {
    if (coeffs.q >= 0 && deltas.size() != static_cast<std::size_t>(coeffs.q + 1))
        throw ConfigError("threshold array length must be q + 1");
    TrendEstimate est;
    est.coeffs = coeffs;
    est.table = &table;
    for (int j = 0; j <= coeffs.q; ++j) {
        auto& flags = est.coeffs.kept[j];
        const auto& d = est.coeffs.d_hat[j];
        for (std::size_t idx = 0; idx < d.size(); ++idx)
            flags[idx] = std::abs(d[idx]) > deltas[j] ? 1 : 0;
    }
    est.grid.resize(grid_points + 1);
    est.values.assign(grid_points + 1, 0.0);
    for (std::size_t i = 0; i <= grid_points; ++i)
        est.grid[i] = static_cast<double>(i) / static_cast<double>(grid_points);

    const long N = coeffs.support;
    auto add_level = [&](BasisKind kind, int lev, int j) {
        const double s = static_cast<double>(N) * std::ldexp(1.0, lev);
        const double amp = std::sqrt(static_cast<double>(N)) * std::pow(2.0, lev / 2.0);
        const long kmax = N * (1L << lev) - 1;
        const double gp = static_cast<double>(grid_points);
        for (long k = -N + 1; k <= kmax; ++k) {
            const double c = (kind == BasisKind::father) ? est.coeffs.s(k) : est.coeffs.d(j, k);
            if (kind == BasisKind::mother && !est.coeffs.kept[j][k + N - 1]) continue;
            if (c == 0.0) continue;
            // support in t: [k/s, (k+N)/s]
            const long glo = std::max(0L, static_cast<long>(std::ceil(static_cast<double>(k) / s * gp)));
            const long ghi = std::min(static_cast<long>(grid_points),
                                      static_cast<long>(std::floor(static_cast<double>(k + N) / s * gp)));
            for (long i = glo; i <= ghi; ++i) {
                const double x = s * est.grid[i] - static_cast<double>(k);
                const double w = (kind == BasisKind::father) ? table.eval_phi(x) : table.eval_psi(x);
                est.values[i] += c * amp * w;
            }
        }
    };
    add_level(BasisKind::father, coeffs.J, -1);
    for (int j = 0; j <= coeffs.q; ++j) add_level(BasisKind::mother, coeffs.J + j, j);
    return est;
}

double asymptotic_detail(const TrendFunction& trend, int j, long k, int J,
                         const LrdBasisConstants& c) {
    const double N = c.support;
    const int lev = J + j;
    double rfac = 1.0;
    for (int i = 2; i <= c.r; ++i) rfac *= i;
    const double t0 = static_cast<double>(k) / (N * std::ldexp(1.0, lev));
    if (t0 < 0.0 || t0 > 1.0) return 0.0;
    const double scale = std::pow(N, -(2.0 * c.r + 1.0) / 2.0)
                       * std::pow(2.0, -(2.0 * c.r + 1.0) / 2.0 * lev);
    return c.nu_r / rfac * trend.deriv(c.r, t0) * scale;
}

TrendEstimate adaptive_estimate(const Sample& sample, const FarimaModel& model,
                                const LrdBasisConstants& constants,
                                const TrendSmoothness& smooth, const DyadicTable& table,
                                const EstimateOptions& options) {
    (void)model;  // the noise model enters through the precomputed constants
    const auto plan = make_plan(sample.n(), constants, smooth, options.plan);
    auto coeffs = coefficients_impl(sample, table, plan.J, plan.q, options.method);
    auto est = reconstruct(coeffs, plan.thresholds, table, options.grid_factor * sample.n());
    est.plan = plan;
    return est;
}

double empirical_mise(const TrendEstimate& est, const std::function<double(double)>& truth) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < est.grid.size(); ++i) {
        const double e0 = est.values[i] - truth(est.grid[i]);
        const double e1 = est.values[i + 1] - truth(est.grid[i + 1]);
        acc += (e0 * e0 + e1 * e1) / 2.0 * (est.grid[i + 1] - est.grid[i]);
    }
    return acc;
}

double tail_energy(const TrendSmoothness& smooth, int J, int q, const LrdBasisConstants& c) {
    double rfac = 1.0;
    for (int i = 2; i <= c.r; ++i) rfac *= i;
    const double num = c.nu_r * c.nu_r * smooth.integral_gr_sq;
    return num / (rfac * rfac) / (std::pow(4.0, c.r) - 1.0)
           * std::pow(static_cast<double>(c.support), -2.0 * c.r)
           * std::pow(2.0, -2.0 * c.r * (J + q));
}

}  // namespace wavetrend
