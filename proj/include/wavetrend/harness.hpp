#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavetrend/baselines.hpp"
#include "wavetrend/estimator.hpp"

namespace wavetrend {

enum class Method { adaptive, minimax, kernel };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct ExperimentConfig {
    std::string trend = "sine";
    double jump_size = 1.0;
    std::string basis = "s4";
    double d = 0.2;
    std::vector<std::size_t> sizes = {128, 256, 512, 1024, 2048, 4096, 8192};
    std::size_t replicates = 400;
    std::uint64_t base_seed = 1;
    std::vector<Method> methods = {Method::adaptive};
    std::string output_dir = ".";
    ThresholdRule rule = ThresholdRule::practical;
    CoefficientMethod coefficients = CoefficientMethod::interp;
    int resolution = 12;     // dyadic table resolution M
    int threads = 0;         // 0: hardware concurrency
    std::size_t grid_factor = 4;

    void check() const;
};

struct MiseCell {
    Method method;
    std::size_t n = 0;
    double mise_mean = 0.0;
    double mise_se = 0.0;                 // sample std / sqrt(R)
    std::optional<double> mise_theor;     // defined for the adaptive method
    std::optional<double> ratio;          // mean / theor when theor is defined
    std::string error;                    // non-empty when the cell aborted
};

struct MiseReport {
    ExperimentConfig config;
    std::vector<MiseCell> cells;

    const MiseCell* find(Method m, std::size_t n) const;
};

// Monte Carlo over (method, n) cells; replicate seeds are base_seed + index.
// Aggregation is pairwise and scheduling independent.
MiseReport run_experiment(const ExperimentConfig& config);

// Write report as CSV and JSON into config.output_dir; returns the CSV path.
std::string write_report_csv(const MiseReport& report, const std::string& stem);
std::string write_report_json(const MiseReport& report, const std::string& stem);

struct FigureData {
    std::vector<double> log2_n;
    std::vector<std::string> series;                // method names
    std::vector<std::vector<double>> log2_mise;     // [series][point]
    std::vector<std::optional<double>> slopes;      // least-squares slope per series
};

// log2 MISE vs log2 n table + least-squares slopes + a static SVG chart.
FigureData emit_figure_data(const MiseReport& report, const std::string& stem);

// Deterministic pairwise summation (scheduling independent reductions).
double pairwise_sum(const std::vector<double>& values);

}  // namespace wavetrend
