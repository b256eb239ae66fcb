#include "wavetrend/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace wavetrend {

namespace {

// Daubechies extremal-phase filters, sum normalized to 2.
// "s4", "s6", ... follow the naming of the wavelet software tradition:
// s(2m) has 2m taps and m vanishing moments.
const std::map<std::string, WaveletSpec>& registry() {
    static const std::map<std::string, WaveletSpec> reg = [] {
        std::map<std::string, WaveletSpec> r;
        r["haar"] = WaveletSpec{"haar", 1, {1.0, 1.0}};
        r["s4"] = WaveletSpec{"s4", 2,
            {0.6830127018922193233818615854, 1.183012701892219323381861585,
             0.3169872981077806766181384146, -0.1830127018922193233818615854}};
        r["s6"] = WaveletSpec{"s6", 3,
            {0.4704672077841636807533291076, 1.14111691583144362576012563,
             0.650365000526232528506934829, -0.1909344155683273615066582151,
             -0.1208322083103962092602639366, 0.04981749973688373574653258548}};
        r["s8"] = WaveletSpec{"s8", 4,
            {0.3258034280512983482745201731, 1.010945715091828862882733348,
             0.8922001382467596231716695053, -0.03957502623564464309536266817,
             -0.2645071673690397360516848289, 0.04361630047417725265773999411,
             0.04650360107098176460549515054, -0.01498698933036147244511067365}};
        r["s10"] = WaveletSpec{"s10", 5,
            {0.2264189825835583576483946074, 0.8539435427050283324470191357,
             1.024326944259197073234454437, 0.1957669613478093480572738658,
             -0.3426567153829348864475960273, -0.0456011318835472974848017951,
             0.1097026586421336470442496905, -0.008826800108358254544295173382,
             -0.01779187010195419147950270771, 0.004717427939067871524803966944}};
        return r;
    }();
    return reg;
}

// phi at the integers 0..N from the transfer eigenproblem phi(k) = sum h_m phi(2k-m),
// normalized by partition of unity (sum phi(k) = 1).  phi(0) = phi(N) = 0 for N >= 2.
std::vector<double> integer_values(const std::vector<double>& h) {
    const int N = static_cast<int>(h.size()) - 1;
    if (N == 1) return {1.0, 0.0};  // Haar convention: phi = 1 on [0,1)
    const int dim = N - 1;
    std::vector<double> v(dim, 1.0 / dim), next(dim);
    // power iteration toward the eigenvalue-1 eigenvector; the iteration matrix
    // has spectral radius 1 with a simple leading eigenvalue for valid filters
    for (int it = 0; it < 20000; ++it) {
        for (int k = 1; k < N; ++k) {
            double acc = 0.0;
            for (int j = 1; j < N; ++j) {
                const int m = 2 * k - j;
                if (m >= 0 && m <= N) acc += h[m] * v[j - 1];
            }
            next[k - 1] = acc;
        }
        double s = 0.0;
        for (double x : next) s += x;
        if (std::abs(s) < 1e-300) throw InvalidSpecError("cascade failed: degenerate eigenvector");
        for (auto& x : next) x /= s;
        double diff = 0.0;
        for (int i = 0; i < dim; ++i) diff = std::max(diff, std::abs(next[i] - v[i]));
        v = next;
        if (diff < 1e-15 && it > 4) break;
    }
    std::vector<double> out(N + 1, 0.0);
    for (int k = 1; k < N; ++k) out[k] = v[k - 1];
    return out;
}

// Refine integer values down to resolution M: values[j] = phi(j / 2^M).
std::vector<double> refine(const std::vector<double>& h, std::vector<double> cur, int levels) {
    const long N = static_cast<long>(h.size()) - 1;
    const int L = static_cast<int>(h.size());
    for (int lev = 1; lev <= levels; ++lev) {
        const long half = static_cast<long>(cur.size()) - 1;  // = N * 2^{lev-1}
        const long step = half / N;                           // = 2^{lev-1}
        std::vector<double> next(2 * half + 1, 0.0);
        for (long j = 0; j <= half; ++j) next[2 * j] = cur[j];
        for (long j = 1; j < 2 * half; j += 2) {
            // x = j / 2^lev; phi(x) = sum h_m phi(2x - m); (2x - m) has index
            // j - m * 2^{lev-1} on the previous grid
            double acc = 0.0;
            for (int m = 0; m < L; ++m) {
                const long idx = j - m * step;
                if (idx >= 0 && idx <= half) acc += h[m] * cur[idx];
            }
            next[j] = acc;
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

void WaveletSpec::validate() const {
    if (vanishing_moments < 1) throw InvalidSpecError("vanishing_moments must be >= 1");
    if (filter.size() < 2) throw InvalidSpecError("filter too short");
    double s = 0.0;
    for (double c : filter) s += c;
    if (std::abs(s - 2.0) > 1e-12)
        throw InvalidSpecError("filter coefficients must sum to 2 (got " + std::to_string(s) + ")");
    const int L = static_cast<int>(filter.size());
    for (int shift = 1; 2 * shift < L; ++shift) {
        double dot = 0.0;
        for (int k = 0; k + 2 * shift < L; ++k) dot += filter[k] * filter[k + 2 * shift];
        if (std::abs(dot) > 1e-10)
            throw InvalidSpecError("filter violates double-shift orthogonality");
    }
    double norm = 0.0;
    for (double c : filter) norm += c * c;
    if (std::abs(norm - 2.0) > 1e-10)
        throw InvalidSpecError("filter violates unit-norm condition sum h^2 = 2");
}

std::vector<double> WaveletSpec::wavelet_filter() const {
    const int L = static_cast<int>(filter.size());
    std::vector<double> g(L);
    for (int k = 0; k < L; ++k)
        g[k] = ((k % 2) == 0 ? 1.0 : -1.0) * filter[L - 1 - k];
    return g;
}

double DyadicTable::tolerance() const {
    return std::pow(2.0, -resolution / 2.0);
}

double DyadicTable::interp(const std::vector<double>& tab, double x) const {
    if (x <= 0.0 || x >= static_cast<double>(support)) return 0.0;
    const double xi = x * static_cast<double>(1 << resolution);
    const auto i0 = static_cast<std::size_t>(xi);
    const double fr = xi - static_cast<double>(i0);
    return tab[i0] * (1.0 - fr) + tab[i0 + 1] * fr;
}

DyadicTable cascade_evaluate(const WaveletSpec& spec, int resolution) {
    if (resolution < 6) throw InvalidSpecError("resolution exponent must be >= 6");
    spec.validate();
    const auto& h = spec.filter;
    const int N = spec.support();
    const auto g = spec.wavelet_filter();

    // exact phi values one level deeper so that cell midpoints are exact
    const auto ints = integer_values(h);
    const auto fine = refine(h, ints, resolution + 1);  // phi at j/2^{M+1}

    DyadicTable t;
    t.resolution = resolution;
    t.support = N;
    t.vanishing_moments = spec.vanishing_moments;
    const long n = static_cast<long>(N) << resolution;
    t.phi.resize(n + 1);
    t.phi_mid.resize(n);
    for (long j = 0; j <= n; ++j) t.phi[j] = fine[2 * j];
    for (long j = 0; j < n; ++j) t.phi_mid[j] = fine[2 * j + 1];

    // psi(x) = sum g_k phi(2x - k); for x = j/2^{M+1}, 2x - k indexes the fine grid
    // at stride 2^{M+1}; evaluate psi on grid and midpoints from the fine phi values.
    auto psi_at = [&](long num, int den_log) {  // x = num / 2^{den_log}
        double acc = 0.0;
        const long stride = 1L << den_log;  // index scale of the fine grid (level M+1)
        for (int k = 0; k < static_cast<int>(g.size()); ++k) {
            // 2x - k = (2*num - k*2^{den_log}) / 2^{den_log}; fine grid has den 2^{M+1}
            const long fine_idx = (2 * num - static_cast<long>(k) * stride) << (resolution + 1 - den_log);
            if (fine_idx > 0 && fine_idx < static_cast<long>(fine.size()) - 1)
                acc += g[k] * fine[fine_idx];
            else if (fine_idx == 0 || fine_idx == static_cast<long>(fine.size()) - 1)
                acc += g[k] * fine[fine_idx];
        }
        return acc;
    };
    t.psi.resize(n + 1);
    t.psi_mid.resize(n);
    for (long j = 0; j <= n; ++j) t.psi[j] = psi_at(j, resolution);
    for (long j = 0; j < n; ++j) t.psi_mid[j] = psi_at(2 * j + 1, resolution + 1);
    // boundary convention of the basis conditions: psi vanishes at the support ends
    t.psi.front() = 0.0;
    t.psi.back() = 0.0;

    t.quadrature_weights.assign(n, t.cell_width());
    return t;
}

double eval_scaled(const DyadicTable& table, BasisKind kind, int level, long k, double t) {
    const long N = table.support;
    if (k < -N + 1 || k > N * (1L << level) - 1)
        throw std::out_of_range("eval_scaled: shift index outside admissible range");
    const double x = static_cast<double>(N) * std::ldexp(t, level) - static_cast<double>(k);
    const double amp = std::sqrt(static_cast<double>(N)) * std::pow(2.0, level / 2.0);
    return amp * (kind == BasisKind::father ? table.eval_phi(x) : table.eval_psi(x));
}

double moment(const DyadicTable& table, BasisKind kind, int order) {
    auto f = [order](double x) { return std::pow(x, order); };
    return kind == BasisKind::father ? table.integrate_phi(f) : table.integrate_psi(f);
}

double refinement_residual(const WaveletSpec& spec, const DyadicTable& table) {
    const auto& h = spec.filter;
    const int N = spec.support();
    double worst = 0.0;
    const long n = static_cast<long>(N) << table.resolution;
    // probe at quarter points, where both sides genuinely interpolate
    for (long j = 0; j < n; ++j) {
        const double x = (static_cast<double>(j) + 0.25) * table.cell_width();
        double rhs = 0.0;
        for (int m = 0; m < static_cast<int>(h.size()); ++m)
            rhs += h[m] * table.eval_phi(2.0 * x - m);
        worst = std::max(worst, std::abs(table.eval_phi(x) - rhs));
    }
    return worst;
}

const WaveletSpec& find_basis(const std::string& name) {
    const auto& reg = registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw InvalidSpecError("unknown basis: " + name);
    return it->second;
}

std::vector<std::string> basis_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

WaveletSpec load_filter_file(const std::string& path, const std::string& family,
                             int vanishing_moments) {
    std::ifstream in(path);
    if (!in) throw InvalidSpecError("cannot open filter file: " + path);
    std::vector<double> coeffs;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double v;
        if (ls >> v) coeffs.push_back(v);
    }
    WaveletSpec spec{family, vanishing_moments, std::move(coeffs)};
    spec.validate();
    return spec;
}

}  // namespace wavetrend
