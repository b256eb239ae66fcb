#include "wavetrend/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace wavetrend {

std::string method_name(Method m) {
    switch (m) {
        case Method::adaptive: return "adaptive";
        case Method::minimax: return "minimax";
        case Method::kernel: return "kernel";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "adaptive") return Method::adaptive;
    if (name == "minimax") return Method::minimax;
    if (name == "kernel") return Method::kernel;
    throw ConfigError("unknown method: " + name);
}

void ExperimentConfig::check() const {
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    for (auto n : sizes) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw ConfigError("sample sizes must be powers of two >= 8");
    }
    if (methods.empty()) throw ConfigError("no methods selected");
    if (resolution < 6) throw ConfigError("table resolution must be >= 6");
}

const MiseCell* MiseReport::find(Method m, std::size_t n) const {
    for (const auto& c : cells)
        if (c.method == m && c.n == n) return &c;
    return nullptr;
}

double pairwise_sum(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    std::vector<double> buf = values;
    std::size_t len = buf.size();
    while (len > 1) {
        const std::size_t half = (len + 1) / 2;
        for (std::size_t i = 0; i < len / 2; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
        if (len % 2 == 1) buf[len / 2] = buf[len - 1];
        len = half;
    }
    return buf[0];
}

namespace {

struct CellContext {
    const ExperimentConfig* cfg;
    const TrendFunction* trend;
    const DyadicTable* table;
    const LrdBasisConstants* constants;
    const TrendSmoothness* smooth;
    const CirculantSampler* sampler;
    std::size_t n;
    Method method;
};

double one_replicate(const CellContext& ctx, std::uint64_t seed) {
    const auto noise = ctx.sampler->sample(seed);
    Sample sample;
    sample.y.resize(ctx.n);
    const auto nd = static_cast<double>(ctx.n);
    for (std::size_t i = 0; i < ctx.n; ++i)
        sample.y[i] = (*ctx.trend)(static_cast<double>(i + 1) / nd) + noise.values[i];

    const auto& g = *ctx.trend;
    if (ctx.method == Method::kernel) {
        FarimaModel model{ctx.cfg->d, 1.0};
        const double ig2 = ctx.trend->integral_gr_sq(2, ctx.trend->default_lower,
                                                     ctx.trend->default_upper);
        const auto plan = make_kernel_plan(ctx.n, model, ig2);
        const auto est = kernel_estimate(sample, plan, ctx.cfg->grid_factor * ctx.n);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < est.grid.size(); ++i) {
            const double e0 = est.values[i] - g(est.grid[i]);
            const double e1 = est.values[i + 1] - g(est.grid[i + 1]);
            acc += (e0 * e0 + e1 * e1) / 2.0 * (est.grid[i + 1] - est.grid[i]);
        }
        return acc;
    }

    if (ctx.method == Method::minimax) {
        const auto plan = make_plan(ctx.n, *ctx.constants, *ctx.smooth,
                                    PlanOptions{{}, ctx.cfg->rule, {}});
        const auto est = soft_threshold_estimate(sample, *ctx.constants, *ctx.table, plan.J,
                                                 plan.q, ctx.cfg->coefficients,
                                                 ctx.cfg->grid_factor);
        return empirical_mise(est, [&](double t) { return g(t); });
    }

    FarimaModel model{ctx.cfg->d, 1.0};
    EstimateOptions opt;
    opt.method = ctx.cfg->coefficients;
    opt.plan.rule = ctx.cfg->rule;
    opt.grid_factor = ctx.cfg->grid_factor;
    const auto est = adaptive_estimate(sample, model, *ctx.constants, *ctx.smooth,
                                       *ctx.table, opt);
    return empirical_mise(est, [&](double t) { return g(t); });
}

}  // namespace

MiseReport run_experiment(const ExperimentConfig& cfg) {
    cfg.check();
    MiseReport report;
    report.config = cfg;

    const auto trend = find_trend(cfg.trend, cfg.jump_size);
    const auto& spec = find_basis(cfg.basis);
    const auto table = cascade_evaluate(spec, cfg.resolution);
    FarimaModel model{cfg.d, 1.0};
    const auto constants = basis_constants(spec, table, model);
    const auto smooth = trend.divergent_full_smoothness
                            ? doppler_cstar_override(trend, spec.vanishing_moments)
                            : trend.smoothness(spec.vanishing_moments);

    unsigned hw = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                  : std::max(1u, std::thread::hardware_concurrency());

    for (std::size_t n : cfg.sizes) {
        std::optional<CirculantSampler> sampler;
        try {
            sampler.emplace(model, n);
        } catch (const std::exception& e) {
            for (Method m : cfg.methods) {
                MiseCell cell;
                cell.method = m;
                cell.n = n;
                cell.error = e.what();
                report.cells.push_back(cell);
            }
            continue;
        }
        for (Method m : cfg.methods) {
            MiseCell cell;
            cell.method = m;
            cell.n = n;
            CellContext ctx{&cfg, &trend, &table, &constants, &smooth, &*sampler, n, m};
            std::vector<double> ises(cfg.replicates, 0.0);
            std::string error;
            const std::size_t R = cfg.replicates;
            const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(R));
            std::vector<std::thread> pool;
            std::vector<std::string> errors(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t rep = w; rep < R; rep += workers)
                            ises[rep] = one_replicate(ctx, cfg.base_seed + rep);
                    } catch (const std::exception& e) {
                        errors[w] = e.what();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& e : errors)
                if (!e.empty()) error = e;
            if (!error.empty()) {
                cell.error = error;
                report.cells.push_back(cell);
                continue;
            }
            const double mean = pairwise_sum(ises) / static_cast<double>(R);
            double var = 0.0;
            if (R > 1) {
                std::vector<double> sq(R);
                for (std::size_t i = 0; i < R; ++i) sq[i] = (ises[i] - mean) * (ises[i] - mean);
                var = pairwise_sum(sq) / static_cast<double>(R - 1);
            }
            cell.mise_mean = mean;
            cell.mise_se = std::sqrt(var / static_cast<double>(R));
            if (m == Method::adaptive) {
                try {
                    const auto plan = make_plan(n, constants, smooth, PlanOptions{{}, cfg.rule, {}});
                    cell.mise_theor = theoretical_mise(n, plan.regime, constants, smooth);
                    cell.ratio = cell.mise_mean / *cell.mise_theor;
                } catch (const std::exception&) {
                    // theoretical value undefined for this configuration
                }
            }
            report.cells.push_back(cell);
        }
    }
    return report;
}

namespace {

std::string cell_csv_row(const MiseCell& c) {
    std::ostringstream os;
    os.precision(12);
    os << method_name(c.method) << ',' << c.n << ',' << c.mise_mean << ',' << c.mise_se << ',';
    if (c.mise_theor) os << *c.mise_theor;
    os << ',';
    if (c.ratio) os << *c.ratio;
    os << ',' << c.error;
    return os.str();
}

}  // namespace

std::string write_report_csv(const MiseReport& report, const std::string& stem) {
    std::filesystem::create_directories(report.config.output_dir);
    const auto path = report.config.output_dir + "/" + stem + ".csv";
    std::ofstream out(path);
    out << "method,n,mise_mean,mise_se,mise_theor,ratio,error\n";
    for (const auto& c : report.cells) out << cell_csv_row(c) << "\n";
    return path;
}

std::string write_report_json(const MiseReport& report, const std::string& stem) {
    nlohmann::json j;
    j["trend"] = report.config.trend;
    j["jump_size"] = report.config.jump_size;
    j["basis"] = report.config.basis;
    j["d"] = report.config.d;
    j["replicates"] = report.config.replicates;
    j["base_seed"] = report.config.base_seed;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : report.cells) {
        nlohmann::json jc;
        jc["method"] = method_name(c.method);
        jc["n"] = c.n;
        jc["mise_mean"] = c.mise_mean;
        jc["mise_se"] = c.mise_se;
        if (c.mise_theor) jc["mise_theor"] = *c.mise_theor;
        if (c.ratio) jc["ratio"] = *c.ratio;
        if (!c.error.empty()) jc["error"] = c.error;
        j["cells"].push_back(jc);
    }
    std::filesystem::create_directories(report.config.output_dir);
    const auto path = report.config.output_dir + "/" + stem + ".json";
    std::ofstream out(path);
    out << j.dump(2) << "\n";
    return path;
}

namespace {

std::optional<double> ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) return std::nullopt;
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_svg(const FigureData& fd, const std::string& path) {
    const int W = 640, H = 440, L = 70, B = 50, T = 20, Rm = 20;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (double x : fd.log2_n) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (const auto& s : fd.log2_mise)
        for (double y : s) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - Rm); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - B - T); };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - Rm << "' y2='" << H - B
        << "' stroke='black'/>\n";
    out << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
        << "' stroke='black'/>\n";
    out << "<text x='" << (W / 2) << "' y='" << H - 12
        << "' text-anchor='middle' font-size='13'>log2 n</text>\n";
    out << "<text x='16' y='" << (H / 2)
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 " << (H / 2)
        << ")'>log2 MISE</text>\n";
    for (std::size_t s = 0; s < fd.series.size(); ++s) {
        std::ostringstream pts;
        for (std::size_t i = 0; i < fd.log2_n.size(); ++i)
            pts << px(fd.log2_n[i]) << ',' << py(fd.log2_mise[s][i]) << ' ';
        out << "<polyline fill='none' stroke='" << colors[s % 3] << "' stroke-width='1.5' points='"
            << pts.str() << "'/>\n";
        for (std::size_t i = 0; i < fd.log2_n.size(); ++i)
            out << "<circle cx='" << px(fd.log2_n[i]) << "' cy='" << py(fd.log2_mise[s][i])
                << "' r='3' fill='" << colors[s % 3] << "'/>\n";
        out << "<text x='" << (L + 10) << "' y='" << (T + 16 + 16 * s) << "' font-size='12' fill='"
            << colors[s % 3] << "'>" << fd.series[s];
        if (fd.slopes[s]) out << " (slope " << *fd.slopes[s] << ")";
        out << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace

FigureData emit_figure_data(const MiseReport& report, const std::string& stem) {
    FigureData fd;
    std::vector<std::size_t> ns;
    for (const auto& c : report.cells)
        if (c.error.empty() && std::find(ns.begin(), ns.end(), c.n) == ns.end())
            ns.push_back(c.n);
    std::sort(ns.begin(), ns.end());
    if (ns.empty()) throw ConfigError("report holds no usable cells");
    for (auto n : ns) fd.log2_n.push_back(std::log2(static_cast<double>(n)));
    for (Method m : report.config.methods) {
        std::vector<double> ys;
        for (auto n : ns) {
            const auto* c = report.find(m, n);
            if (c && c->error.empty()) ys.push_back(std::log2(c->mise_mean));
        }
        if (ys.size() != ns.size()) continue;
        fd.series.push_back(method_name(m));
        fd.log2_mise.push_back(ys);
        fd.slopes.push_back(ls_slope(fd.log2_n, ys));
    }
    std::filesystem::create_directories(report.config.output_dir);
    const auto csv = report.config.output_dir + "/" + stem + ".csv";
    std::ofstream out(csv);
    out << "log2_n";
    for (const auto& s : fd.series) out << ",log2_mise_" << s;
    out << "\n";
    out.precision(12);
    for (std::size_t i = 0; i < fd.log2_n.size(); ++i) {
        out << fd.log2_n[i];
        for (const auto& series : fd.log2_mise) out << ',' << series[i];
        out << "\n";
    }
    out << "slope";
    for (const auto& s : fd.slopes) {
        out << ',';
        if (s) out << *s;
    }
    out << "\n";
    write_svg(fd, report.config.output_dir + "/" + stem + ".svg");
    return fd;
}

}  // namespace wavetrend
