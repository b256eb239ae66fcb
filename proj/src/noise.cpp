#include "wavetrend/noise.hpp"

#include <cmath>

#include "wavetrend/fft.hpp"

namespace wavetrend {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double FarimaModel::c_f() const {
    return innovation_variance / (2.0 * kPi);
}

double autocov(const FarimaModel& model, long lag) {
    model.check();
    const double d = model.d;
    const long k = std::labs(lag);
    // gamma(k) = sigma^2 Gamma(1-2d) Gamma(k+d) / (Gamma(d) Gamma(1-d) Gamma(k+1-d))
    const double lg = std::lgamma(1.0 - 2.0 * d) - std::lgamma(d) - std::lgamma(1.0 - d)
                    + std::lgamma(static_cast<double>(k) + d)
                    - std::lgamma(static_cast<double>(k) + 1.0 - d);
    return model.innovation_variance * std::exp(lg);
}

std::vector<double> autocov_vector(const FarimaModel& model, std::size_t count) {
    model.check();
    std::vector<double> g(count);
    if (count == 0) return g;
    g[0] = autocov(model, 0);
    // gamma(k)/gamma(k-1) = (k-1+d)/(k-d): cheaper and exact
    for (std::size_t k = 1; k < count; ++k)
        g[k] = g[k - 1] * ((static_cast<double>(k) - 1.0 + model.d) / (static_cast<double>(k) - model.d));
    return g;
}

double c_gamma(const FarimaModel& model) {
    model.check();
    const double d = model.d;
    const double lg = std::lgamma(1.0 - 2.0 * d) - std::lgamma(d) - std::lgamma(1.0 - d);
    return model.innovation_variance * std::exp(lg);
}

double GaussianRng::operator()() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on uniforms from a fixed 53-bit mapping (platform independent)
    const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

CirculantSampler::CirculantSampler(const FarimaModel& model, std::size_t n) : n_(n) {
    model.check();
    if (n < 2) throw std::domain_error("sample size must be >= 2");
    // embedding size m = 2n (doubled on failure); power of two keeps the FFT radix-2
    std::size_t m = 1;
    while (m < 2 * n) m <<= 1;
    for (int attempt = 0; attempt < 3; ++attempt, m <<= 1) {
        const auto g = autocov_vector(model, m / 2 + 1);
        std::vector<std::complex<double>> c(m);
        for (std::size_t k = 0; k <= m / 2; ++k) c[k] = g[k];
        for (std::size_t k = m / 2 + 1; k < m; ++k) c[k] = g[m - k];
        fft(c);
        double min_ev = 0.0;
        for (const auto& x : c) min_ev = std::min(min_ev, x.real());
        if (min_ev < -1e-9 * g[0]) continue;  // not nonnegative definite: double m
        sqrt_lambda_.resize(m);
        for (std::size_t k = 0; k < m; ++k)
            sqrt_lambda_[k] = std::sqrt(std::max(0.0, c[k].real()) / (2.0 * static_cast<double>(m)));
        return;
    }
    throw NumericError("circulant embedding not nonnegative definite after doubling");
}

NoisePath CirculantSampler::sample(std::uint64_t seed) const {
    const std::size_t m = sqrt_lambda_.size();
    GaussianRng rng(seed);
    std::vector<std::complex<double>> z(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double re = rng();
        const double im = rng();
        z[k] = std::complex<double>(re * sqrt_lambda_[k], im * sqrt_lambda_[k]);
    }
    fft(z);
    NoisePath path;
    path.n = n_;
    path.seed = seed;
    path.values.resize(n_);
    const double s2 = std::sqrt(2.0);
    // Re(FFT of independent complex normals weighted by sqrt(lambda/2m)) * sqrt(2)
    // has exactly the circulant covariance; the first n entries carry gamma.
    for (std::size_t i = 0; i < n_; ++i) path.values[i] = s2 * z[i].real();
    return path;
}

NoisePath simulate(const FarimaModel& model, std::size_t n, std::uint64_t seed) {
    return CirculantSampler(model, n).sample(seed);
}

}  // namespace wavetrend
