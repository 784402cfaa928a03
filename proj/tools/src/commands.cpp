#include "ousv_app/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <ousv/errors.hpp>
#include <ousv/ou_process.hpp>

namespace fs = std::filesystem;

namespace ousv::app {

std::string_view to_string(Command c) {
    switch (c) {
        case Command::Price: return "price";
        case Command::Dist: return "dist";
        case Command::SamplePaths: return "sample-paths";
        case Command::Check: return "check";
        case Command::Compare: return "compare";
    }
    return "?";
}

bool method_applicable(PricingMethod method, const MeasureSpec& measure) {
    return method == PricingMethod::McTerminal || measure.is_minimal_uncorrelated();
}

Pricer::Pricer(RunConfig config) : config_(std::move(config)), digest_(config_digest(config_)) {}

std::shared_ptr<const AvgVarSamples> Pricer::cdf_samples() {
    if (!samples_) {
        const auto& n = config_.numerics;
        samples_ = std::make_shared<const AvgVarSamples>(sample_avg_var(
            config_.ou, config_.vol, config_.option.maturity, n.cdf_samples, n.grid_n, n.seed, n.workers));
    }
    return samples_;
}

const InversionCdfProvider& Pricer::inversion_provider() {
    if (!inversion_) {
        InversionSpec spec = inversion_spec_for(config_.vol);
        if (config_.numerics.inversion_U > 0.0) spec.cutoff = config_.numerics.inversion_U;
        inversion_ = std::make_unique<InversionCdfProvider>(cdf_samples(), spec);
    }
    return *inversion_;
}

ExactQuadrature Pricer::quadrature() const {
    ExactQuadrature q;
    q.nodes = config_.numerics.quad_nodes;
    return q;
}

PriceResult Pricer::price(PricingMethod method) {
    if (!method_applicable(method, config_.measure))
        throw MethodNotApplicable(std::string(to_string(method)) + " requires measure.rho = 0 and measure.nu = zero");
    const auto& mk = config_.market;
    const auto& op = config_.option;
    PriceResult r;
    switch (method) {
        case PricingMethod::McTerminal:
            r = mc_price_terminal(config_.model(), op, config_.mc_settings());
            break;
        case PricingMethod::McMixing:
            if (!config_.numerics.antithetic && config_.numerics.cdf_samples == config_.numerics.n_paths)
                r = mixing_from_samples(*cdf_samples(), mk.spot, op.strike, mk.rate, op.maturity);
            else
                r = mc_price_mixing(config_.model(), op, config_.mc_settings());
            break;
        case PricingMethod::ExactEmpirical:
            r = exact_price(mk.spot, op.strike, mk.rate, op.maturity, EmpiricalCdfProvider(cdf_samples()),
                            quadrature());
            break;
        case PricingMethod::ExactInversion:
            r = exact_price(mk.spot, op.strike, mk.rate, op.maturity, inversion_provider(), quadrature());
            break;
        case PricingMethod::ExactFullform:
            r = exact_price_fullform(mk.spot, op.strike, mk.rate, op.maturity, EmpiricalCdfProvider(cdf_samples()),
                                     quadrature());
            break;
    }
    r.config_digest = digest_;
    return r;
}

double z_score(const PriceResult& a, const PriceResult& b) {
    const double diff = a.price - b.price;
    if (std::fabs(diff) <= 1e-10 * std::max({1.0, std::fabs(a.price), std::fabs(b.price)})) return 0.0;
    const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error +
                                a.quad_error * a.quad_error + b.quad_error * b.quad_error);
    return se > 0.0 ? diff / se : std::copysign(INFINITY, diff);
}

CompareReport compare(const RunConfig& config) {
    Pricer pricer(config);
    CompareReport report{{}, {}, true};
    constexpr std::array methods{PricingMethod::McTerminal, PricingMethod::McMixing, PricingMethod::ExactEmpirical,
                                 PricingMethod::ExactInversion, PricingMethod::ExactFullform};
    for (auto m : methods)
        if (method_applicable(m, config.measure)) report.results.push_back(pricer.price(m));
    for (std::size_t i = 0; i < report.results.size(); ++i) {
        for (std::size_t j = i + 1; j < report.results.size(); ++j) {
            const auto& a = report.results[i];
            const auto& b = report.results[j];
            const double z = z_score(a, b);
            report.rows.push_back({a.method, b.method, a.price, b.price, a.std_error, b.std_error, z});
            if (!(std::fabs(z) < 3.0)) report.pass = false;
        }
    }
    return report;
}

std::vector<DistRow> distribution(const RunConfig& config, std::size_t points) {
    if (points < 2) throw std::invalid_argument("dist: at least 2 points required");
    Pricer pricer(config);
    const auto samples = pricer.cdf_samples();
    const EmpiricalCdf empirical(*samples);
    const auto& inverter = pricer.inversion_provider().inverter();
    double lo = empirical.min();
    double hi = empirical.max();
    if (!(hi > lo)) {
        lo *= 0.99;
        hi *= 1.01;
    }
    std::vector<DistRow> rows;
    rows.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        rows.push_back({x, empirical(x), inverter.cdf(x)});
    }
    return rows;
}

CheckReport check(const RunConfig& config) {
    const auto model = config.model();
    const auto settings = config.mc_settings();
    CheckReport r{std::nullopt, density_check(model, config.option.maturity, settings), true};
    if (config.measure.is_minimal_uncorrelated()) {
        const double T = config.option.maturity;
        r.martingale = martingale_check(model, config.option, settings, {0.0, 0.25 * T, 0.5 * T, T});
        r.pass = r.martingale->pass;
    }
    r.pass = r.pass && r.density.pass && r.density.novikov_satisfied;
    return r;
}

namespace {

std::string num(double x) { return format_number(x); }

}  // namespace

std::string price_csv(const PriceResult& r) {
    std::ostringstream out;
    out << "method,price,stderr,n_paths,seed\n";
    out << to_string(r.method) << ',' << num(r.price) << ',' << num(r.std_error) << ',' << r.n_paths << ','
        << r.seed << '\n';
    return out.str();
}

std::string compare_csv(const CompareReport& r) {
    std::ostringstream out;
    out << "method_a,method_b,price_a,price_b,stderr_a,stderr_b,z_score\n";
    for (const auto& row : r.rows)
        out << to_string(row.method_a) << ',' << to_string(row.method_b) << ',' << num(row.price_a) << ','
            << num(row.price_b) << ',' << num(row.stderr_a) << ',' << num(row.stderr_b) << ',' << num(row.z)
            << '\n';
    return out.str();
}

std::string dist_csv(const std::vector<DistRow>& rows) {
    std::ostringstream out;
    out << "x,cdf_empirical,cdf_inversion\n";
    for (const auto& row : rows)
        out << num(row.x) << ',' << num(row.cdf_empirical) << ',' << num(row.cdf_inversion) << '\n';
    return out.str();
}

std::string sample_paths_csv(const RunConfig& config, std::size_t paths) {
    const TimeGrid grid = TimeGrid::uniform(config.option.maturity, config.numerics.grid_n);
    std::ostringstream out;
    out << "path,t,y,sigma\n";
    for (std::size_t p = 0; p < paths; ++p) {
        const OUPath path = simulate_ou(config.ou, grid, config.numerics.seed, p);
        for (std::size_t i = 0; i < grid.size(); ++i)
            out << p << ',' << num(grid[i]) << ',' << num(path.values[i]) << ',' << num(config.vol(path.values[i]))
                << '\n';
    }
    return out.str();
}

std::string check_csv(const CheckReport& r) {
    std::ostringstream out;
    out << "t,mean,stderr,z,pass\n";
    if (!r.martingale) return out.str();
    for (const auto& c : r.martingale->checkpoints) {
        const double z = c.std_error > 0.0 ? (c.mean - r.martingale->spot) / c.std_error : 0.0;
        out << num(c.t) << ',' << num(c.mean) << ',' << num(c.std_error) << ',' << num(z) << ','
            << (c.pass ? "PASS" : "FAIL") << '\n';
    }
    return out.str();
}

std::string check_text(const RunConfig& config, const CheckReport& r) {
    std::ostringstream out;
    const auto& d = r.density;
    out << "config " << config_digest(config) << '\n';
    out << "novikov exponent bound: " << num(d.novikov_exponent_bound)
        << (d.novikov_satisfied ? " (finite, condition satisfied)" : " (not finite)") << '\n';
    out << "sigma^2 X^2 integrability bound: " << num(d.sigma2x2_bound) << '\n';
    if (d.identically_one)
        out << "density: L_T == 1 identically (drift equals rate, nu = 0): PASS\n";
    else
        out << "density: E[L_T] = " << num(d.mean_density) << " +- " << num(d.std_error) << ": "
            << (d.pass ? "PASS" : "FAIL") << '\n';
    if (r.martingale) {
        for (const auto& c : r.martingale->checkpoints)
            out << "martingale t=" << num(c.t) << " mean " << num(c.mean) << " +- " << num(c.std_error) << ": "
                << (c.pass ? "PASS" : "FAIL") << '\n';
    } else {
        out << "martingale: skipped (requires measure.rho = 0 and measure.nu = zero)\n";
    }
    out << "overall: " << (r.pass ? "PASS" : "FAIL") << '\n';
    return out.str();
}

std::string resolve_output_path(Command command, const RunConfig& config, const std::string& cli_out) {
    std::string path = cli_out.empty() ? config.output.path : cli_out;
    if (const char* dir = std::getenv("OUSV_OUTPUT_DIR"); dir && *dir) {
        const std::string name =
            path.empty() ? std::string(to_string(command)) + ".csv" : fs::path(path).filename().string();
        return (fs::path(dir) / name).string();
    }
    return path;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".partial";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
            out << content;
            out.flush();
            if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

int run(const RunOptions& options, const RunConfig& config, std::ostream& out, std::ostream& log) {
    const std::string path = resolve_output_path(options.command, config, options.out);
    std::string csv;
    int status = 0;
    switch (options.command) {
        case Command::Price: {
            const auto method = options.method ? options.method : config.method;
            if (!method) throw std::invalid_argument("price: --method or a 'method' config key is required");
            Pricer pricer(config);
            csv = price_csv(pricer.price(*method));
            break;
        }
        case Command::Dist:
            csv = dist_csv(distribution(config, options.points));
            break;
        case Command::SamplePaths:
            csv = sample_paths_csv(config, options.paths);
            break;
        case Command::Check: {
            const auto report = check(config);
            log << check_text(config, report);
            csv = check_csv(report);
            status = report.pass ? 0 : 3;
            break;
        }
        case Command::Compare: {
            const auto report = compare(config);
            for (const auto& r : report.results)
                log << to_string(r.method) << ": " << num(r.price) << " +- " << num(r.std_error)
                    << (r.experimental ? " (experimental)" : "") << '\n';
            csv = compare_csv(report);
            log << "pairwise |z| < 3: " << (report.pass ? "PASS" : "FAIL") << '\n';
            status = report.pass ? 0 : 3;
            break;
        }
    }
    if (path.empty())
        out << csv;
    else
        write_file_atomic(path, csv);
    return status;
}

}  // namespace ousv::app
