#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace wavetrend {

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// FARIMA(0,d,0) Gaussian noise, d in (0, 1/2).  The long-memory exponent is
// alpha = 1 - 2d; gamma(k) ~ C_gamma |k|^{-alpha}.
struct FarimaModel {
    double d = 0.2;
    double innovation_variance = 1.0;

    double alpha() const { return 1.0 - 2.0 * d; }
    // spectral density at the pole: f(l) ~ C_f |l|^{alpha-1} as l -> 0
    double c_f() const;
    void check() const {
        if (!(d > 0.0 && d < 0.5)) throw std::domain_error("FARIMA d must lie in (0, 1/2)");
        if (!(innovation_variance > 0.0)) throw std::domain_error("innovation variance must be > 0");
    }
};

struct NoisePath {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;
};

// Exact autocovariance gamma(k) via log-Gamma arithmetic.
double autocov(const FarimaModel& model, long lag);
std::vector<double> autocov_vector(const FarimaModel& model, std::size_t count);

// Asymptotic constant C_gamma = sigma^2 Gamma(1-2d) / (Gamma(d) Gamma(1-d)).
double c_gamma(const FarimaModel& model);

// Deterministic Gaussian stream: mt19937_64 + Box-Muller.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}
    double operator()();

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Exact stationary Gaussian sampling by circulant embedding of the
// autocovariance (the eigenvalue pass is done once per (model, n)).
class CirculantSampler {
public:
    CirculantSampler(const FarimaModel& model, std::size_t n);
    NoisePath sample(std::uint64_t seed) const;
    std::size_t size() const { return n_; }
    std::size_t embedding_size() const { return sqrt_lambda_.size(); }

private:
    std::size_t n_;
    std::vector<double> sqrt_lambda_;  // sqrt(lambda_k / (2m)) weights
};

// One-shot convenience wrapper.
NoisePath simulate(const FarimaModel& model, std::size_t n, std::uint64_t seed);

}  // namespace wavetrend
