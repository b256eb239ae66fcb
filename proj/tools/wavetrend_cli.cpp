#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "wavetrend/harness.hpp"

namespace wt = wavetrend;

namespace {

struct CliConfig {
    wt::ExperimentConfig exp;
    std::string config_path;
    std::string out = ".";
    std::string trend = "sine";
    std::string basis = "s4";
    double d = 0.2;
    double jump_size = 1.0;
    std::vector<std::size_t> sizes;
    std::size_t replicates = 400;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string methods = "adaptive";
    std::string rule = "practical";
    std::string coefficients = "interp";
    int resolution = 12;
    int threads = 0;
};

void load_json_config(CliConfig& c) {
    if (c.config_path.empty()) return;
    std::ifstream in(c.config_path);
    if (!in) throw wt::ConfigError("cannot open config file: " + c.config_path);
    nlohmann::json j;
    in >> j;
    if (j.contains("trend")) c.trend = j["trend"].get<std::string>();
    if (j.contains("basis")) c.basis = j["basis"].get<std::string>();
    if (j.contains("d")) c.d = j["d"].get<double>();
    if (j.contains("jump_size")) c.jump_size = j["jump_size"].get<double>();
    if (j.contains("sizes")) c.sizes = j["sizes"].get<std::vector<std::size_t>>();
    if (j.contains("replicates")) c.replicates = j["replicates"].get<std::size_t>();
    if (j.contains("seed")) {
        c.seed = j["seed"].get<std::uint64_t>();
        c.seed_set = true;
    }
    if (j.contains("methods")) c.methods = j["methods"].get<std::string>();
    if (j.contains("rule")) c.rule = j["rule"].get<std::string>();
    if (j.contains("coefficients")) c.coefficients = j["coefficients"].get<std::string>();
    if (j.contains("resolution")) c.resolution = j["resolution"].get<int>();
    if (j.contains("output_dir")) c.out = j["output_dir"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
}

wt::ExperimentConfig build_config(const CliConfig& c) {
    wt::ExperimentConfig e;
    e.trend = c.trend;
    e.jump_size = c.jump_size;
    e.basis = c.basis;
    e.d = c.d;
    if (!c.sizes.empty()) e.sizes = c.sizes;
    e.replicates = c.replicates;
    e.base_seed = c.seed;
    e.methods.clear();
    std::string tok;
    std::istringstream ms(c.methods);
    while (std::getline(ms, tok, ','))
        if (!tok.empty()) e.methods.push_back(wt::parse_method(tok));
    e.output_dir = c.out;
    if (c.rule == "practical") e.rule = wt::ThresholdRule::practical;
    else if (c.rule == "theorem") e.rule = wt::ThresholdRule::theorem;
    else throw wt::ConfigError("unknown threshold rule: " + c.rule);
    if (c.coefficients == "interp") e.coefficients = wt::CoefficientMethod::interp;
    else if (c.coefficients == "riemann") e.coefficients = wt::CoefficientMethod::riemann;
    else throw wt::ConfigError("unknown coefficient method: " + c.coefficients);
    e.resolution = c.resolution;
    e.threads = c.threads;
    return e;
}

void add_common(CLI::App* cmd, CliConfig& c) {
    cmd->add_option("--config", c.config_path, "JSON config file");
    cmd->add_option("--trend", c.trend, "trend: sine|jumpsine|sharp|doppler");
    cmd->add_option("--basis", c.basis, "basis: haar|s4|s6|s8|s10");
    cmd->add_option("--d", c.d, "FARIMA fractional parameter in (0, 1/2)");
    cmd->add_option("--delta", c.jump_size, "jump size for the jumpsine trend");
    cmd->add_option("--n", c.sizes, "sample sizes (powers of two)");
    cmd->add_option("--replicates,-R", c.replicates, "Monte Carlo replicates per cell");
    cmd->add_option("--methods", c.methods, "comma list: adaptive,minimax,kernel");
    cmd->add_option("--rule", c.rule, "threshold rule: practical|theorem");
    cmd->add_option("--coefficients", c.coefficients, "coefficient path: interp|riemann");
    cmd->add_option("--resolution,-M", c.resolution, "dyadic table resolution");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--threads", c.threads, "worker threads (0 = hardware)");
}

int cmd_simulate(const CliConfig& c) {
    const auto cfg = build_config(c);
    wt::FarimaModel model{cfg.d, 1.0};
    const std::size_t n = cfg.sizes.front();
    const auto path = wt::simulate(model, n, cfg.base_seed);
    const auto trend = wt::find_trend(cfg.trend, cfg.jump_size);
    std::filesystem::create_directories(cfg.output_dir);
    const auto file = cfg.output_dir + "/sample.csv";
    std::ofstream out(file);
    out << "t,xi,y\n";
    out.precision(12);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / static_cast<double>(n);
        out << t << ',' << path.values[i] << ',' << trend(t) + path.values[i] << "\n";
    }
    std::cout << "wrote " << file << " (n=" << n << ", seed=" << cfg.base_seed << ")\n";
    return 0;
}

int cmd_estimate(const CliConfig& c, const std::string& input) {
    const auto cfg = build_config(c);
    wt::Sample sample;
    if (!input.empty()) {
        std::ifstream in(input);
        if (!in) throw wt::ConfigError("cannot open sample file: " + input);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            const auto last = line.rfind(',');
            if (last == std::string::npos) continue;
            sample.y.push_back(std::stod(line.substr(last + 1)));
        }
    } else {
        const std::size_t n = cfg.sizes.front();
        wt::FarimaModel model{cfg.d, 1.0};
        const auto noise = wt::simulate(model, n, cfg.base_seed);
        const auto trend = wt::find_trend(cfg.trend, cfg.jump_size);
        sample.y.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            sample.y[i] = trend(static_cast<double>(i + 1) / static_cast<double>(n))
                        + noise.values[i];
    }
    const std::size_t n = sample.n();
    if ((n & (n - 1)) != 0) throw wt::ConfigError("sample length must be a power of two");
    const auto& spec = wt::find_basis(cfg.basis);
    const auto table = wt::cascade_evaluate(spec, cfg.resolution);
    wt::FarimaModel model{cfg.d, 1.0};
    const auto constants = wt::basis_constants(spec, table, model);
    const auto trend = wt::find_trend(cfg.trend, cfg.jump_size);
    const auto smooth = trend.divergent_full_smoothness
                            ? wt::doppler_cstar_override(trend, spec.vanishing_moments)
                            : trend.smoothness(spec.vanishing_moments);
    wt::EstimateOptions opt;
    opt.method = cfg.coefficients;
    opt.plan.rule = cfg.rule;
    const auto est = wt::adaptive_estimate(sample, model, constants, smooth, table, opt);

    std::filesystem::create_directories(cfg.output_dir);
    const auto file = cfg.output_dir + "/estimate.csv";
    std::ofstream out(file);
    out << "t,y,g_true,g_hat\n";
    out.precision(12);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / static_cast<double>(n);
        out << t << ',' << sample.y[i] << ',' << trend(t) << ',' << est(t) << "\n";
    }
    const auto cfile = cfg.output_dir + "/coefficients.csv";
    std::ofstream cout_(cfile);
    cout_ << "level,shift,value,kept\n";
    cout_.precision(12);
    const long N = est.coeffs.support;
    for (int j = 0; j <= est.coeffs.q; ++j)
        for (long k = -N + 1; k <= N * (1L << (est.coeffs.J + j)) - 1; ++k)
            cout_ << est.coeffs.J + j << ',' << k << ',' << est.coeffs.d(j, k) << ','
                  << int(est.coeffs.kept[j][k + N - 1]) << "\n";
    std::cout << "plan: J=" << est.plan.J << " q=" << est.plan.q << " q*=" << est.plan.q_star
              << (est.plan.regime_tie ? " (regime tie -> case ii)" : "") << "\n";
    std::cout << "wrote " << file << " and " << cfile << "\n";
    return 0;
}

int cmd_constants(const CliConfig& c) {
    const auto cfg = build_config(c);
    const auto& spec = wt::find_basis(cfg.basis);
    const auto table = wt::cascade_evaluate(spec, cfg.resolution);
    wt::FarimaModel model{cfg.d, 1.0};
    const auto k = wt::basis_constants(spec, table, model);
    nlohmann::json j;
    j["basis"] = cfg.basis;
    j["alpha"] = k.alpha;
    j["C_phi_sq"] = k.c_phi_sq;
    j["C_psi_sq"] = k.c_psi_sq;
    j["nu_r"] = k.nu_r;
    j["r"] = k.r;
    j["N"] = k.support;
    try {
        j["regime"] = wt::regime(k) == wt::Regime::case_i ? "case_i" : "case_ii";
    } catch (const wt::RegimeTieError&) {
        j["regime"] = "tie";
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_table(const CliConfig& c, bool figure) {
    const auto cfg = build_config(c);
    const auto report = wt::run_experiment(cfg);
    const auto csv = wt::write_report_csv(report, "mise_table");
    const auto json = wt::write_report_json(report, "mise_table");
    std::cout << "wrote " << csv << " and " << json << "\n";
    for (const auto& cell : report.cells) {
        std::cout << wt::method_name(cell.method) << " n=" << cell.n;
        if (!cell.error.empty()) {
            std::cout << "  ERROR: " << cell.error << "\n";
            continue;
        }
        std::cout << "  mise=" << cell.mise_mean << " se=" << cell.mise_se;
        if (cell.mise_theor) std::cout << " theor=" << *cell.mise_theor;
        if (cell.ratio) std::cout << " ratio=" << *cell.ratio;
        std::cout << "\n";
    }
    if (figure) {
        const auto fd = wt::emit_figure_data(report, "figure");
        for (std::size_t s = 0; s < fd.series.size(); ++s) {
            std::cout << fd.series[s] << " slope: ";
            if (fd.slopes[s]) std::cout << *fd.slopes[s];
            else std::cout << "(single point)";
            std::cout << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-adaptive wavelet trend estimation under long-range dependence"};
    app.require_subcommand(1);
    CliConfig c;

    auto* sim = app.add_subcommand("simulate", "emit a FARIMA noise/sample path as CSV");
    add_common(sim, c);
    auto* sim_seed = sim->add_option("--seed", c.seed, "RNG seed");

    std::string input;
    auto* est = app.add_subcommand("estimate", "estimate the trend of one path");
    add_common(est, c);
    est->add_option("--seed", c.seed, "RNG seed for the synthetic path");
    est->add_option("--input", input, "CSV with the sample in the last column");

    auto* con = app.add_subcommand("constants", "dump basis/noise constants as JSON");
    add_common(con, c);

    auto* mise = app.add_subcommand("mise-table", "Monte Carlo MISE table");
    add_common(mise, c);
    auto* seed_opt = mise->add_option("--seed", c.seed, "base seed (required)");
    seed_opt->required();

    auto* fig = app.add_subcommand("figure", "MISE table + log-log figure data");
    add_common(fig, c);
    fig->add_option("--seed", c.seed, "base seed (required)")->required();

    auto* cmp = app.add_subcommand("compare", "multi-method comparison report");
    add_common(cmp, c);
    cmp->add_option("--seed", c.seed, "base seed (required)")->required();

    try {
        app.parse(argc, argv);
        load_json_config(c);
        if (sim->parsed()) {
            (void)sim_seed;
            return cmd_simulate(c);
        }
        if (est->parsed()) return cmd_estimate(c, input);
        if (con->parsed()) return cmd_constants(c);
        if (mise->parsed()) return run_table(c, false);
        if (fig->parsed()) return run_table(c, true);
        if (cmp->parsed()) {
            if (c.methods == "adaptive") c.methods = "adaptive,minimax,kernel";
            return run_table(c, false);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const wt::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
