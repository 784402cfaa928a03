#include "ousv/mc_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "ousv/errors.hpp"
#include "ousv/parallel.hpp"

namespace ousv {

std::string_view to_string(PricingMethod m) {
    switch (m) {
        case PricingMethod::McTerminal: return "mc-terminal";
        case PricingMethod::McMixing: return "mc-mixing";
        case PricingMethod::ExactEmpirical: return "exact-empirical";
        case PricingMethod::ExactInversion: return "exact-inversion";
        case PricingMethod::ExactFullform: return "exact-fullform";
    }
    return "unknown";
}

PricingMethod pricing_method_from_string(std::string_view name) {
    for (auto m : {PricingMethod::McTerminal, PricingMethod::McMixing, PricingMethod::ExactEmpirical,
                   PricingMethod::ExactInversion, PricingMethod::ExactFullform})
        if (to_string(m) == name) return m;
    throw std::invalid_argument("unknown pricing method '" + std::string(name) +
                                "' (expected mc-terminal, mc-mixing, exact-empirical, exact-inversion, exact-fullform)");
}

void MeasureSpec::validate() const {
    if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("measure.rho: rho in [-1, 1] required");
    if (!std::isfinite(nu)) throw std::invalid_argument("measure.nu: must be finite");
}

void ModelParams::validate() const {
    market.validate();
    ou.validate();
    measure.validate();
}

namespace {

struct MeanStderr {
    double mean;
    double std_error;
};

// Two-pass so that identical values give exactly zero spread.
MeanStderr mean_and_stderr(std::span<const double> values) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    if (values.size() < 2) return {mean, 0.0};
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); }))
        return {values.front(), 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

void require_paths(const McSettings& s) {
    if (s.n_paths < 1) throw std::invalid_argument("n_paths >= 1 required");
    if (s.grid_n < 1) throw std::invalid_argument("grid_n >= 1 required");
}

// Discounted payoff of one path under independent drivers and nu = 0 (exact OU stepping).
double terminal_path_exact(const ModelParams& mp, const OptionSpec& opt, const TimeGrid& grid,
                           const OUStepper& stepper, std::span<double> y, std::uint64_t seed, std::uint64_t path,
                           bool mirrored, Payoff payoff) {
    NormalStream w(seed, StreamTag::OuDriver, path, mirrored);
    NormalStream b(seed, StreamTag::PriceDriver, path, mirrored);
    stepper.simulate(w, y);
    double log_s = std::log(mp.market.spot) + mp.market.rate * opt.maturity;
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        const double dt = grid[i + 1] - grid[i];
        const double sigma = mp.vol(y[i]);
        log_s += sigma * std::sqrt(dt) * b.next() - 0.5 * sigma * sigma * dt;
    }
    const double s_t = std::exp(log_s);
    const double value = payoff == Payoff::Call ? std::max(s_t - opt.strike, 0.0) : std::max(opt.strike - s_t, 0.0);
    return std::exp(-mp.market.rate * opt.maturity) * value;
}

// Euler scheme for Y under the risk-neutral drift with correlation and constant nu.
double terminal_path_euler(const ModelParams& mp, const OptionSpec& opt, std::size_t steps, std::uint64_t seed,
                           std::uint64_t path, bool mirrored, Payoff payoff) {
    NormalStream b(seed, StreamTag::PriceDriver, path, mirrored);
    NormalStream z(seed, StreamTag::Auxiliary, path, mirrored);
    const double h = opt.maturity / static_cast<double>(steps);
    const double sqrt_h = std::sqrt(h);
    const double rho = mp.measure.rho;
    const double rho_bar = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    const double nu = mp.measure.nu_value();
    const double excess = mp.market.drift - mp.market.rate;
    const auto& ou = mp.ou;
    double y = ou.y0;
    double log_s = std::log(mp.market.spot) + mp.market.rate * opt.maturity;
    for (std::size_t i = 0; i < steps; ++i) {
        const double sigma = mp.vol(y);
        const double db = sqrt_h * b.next();
        const double dz = sqrt_h * z.next();
        log_s += sigma * db - 0.5 * sigma * sigma * h;
        y += (-ou.alpha * y - ou.k_vol * (rho * excess / sigma + nu * rho_bar)) * h +
             ou.k_vol * (rho * db + rho_bar * dz);
    }
    const double s_t = std::exp(log_s);
    const double value = payoff == Payoff::Call ? std::max(s_t - opt.strike, 0.0) : std::max(opt.strike - s_t, 0.0);
    return std::exp(-mp.market.rate * opt.maturity) * value;
}

}  // namespace

PriceResult mc_price_terminal(const ModelParams& params, const OptionSpec& option, const McSettings& settings,
                              Payoff payoff) {
    params.validate();
    option.validate();
    require_paths(settings);
    const bool exact = params.measure.is_minimal_uncorrelated();
    const TimeGrid grid = TimeGrid::uniform(option.maturity, settings.grid_n);
    const OUStepper stepper(params.ou, grid);

    std::vector<double> values(settings.n_paths);
    parallel_for(settings.n_paths, settings.workers, [&](std::size_t i) {
        thread_local std::vector<double> y;
        y.resize(grid.size());
        const auto one = [&](bool mirrored) {
            return exact ? terminal_path_exact(params, option, grid, stepper, y, settings.seed, i, mirrored, payoff)
                         : terminal_path_euler(params, option, 2 * settings.grid_n, settings.seed, i, mirrored, payoff);
        };
        const double v = one(settings.mirrored);
        values[i] = settings.antithetic ? 0.5 * (v + one(!settings.mirrored)) : v;
    });
    const auto est = mean_and_stderr(values);
    PriceResult r;
    r.price = est.mean;
    r.std_error = est.std_error;
    r.method = PricingMethod::McTerminal;
    r.n_paths = settings.n_paths;
    r.seed = settings.seed;
    r.experimental = !exact;
    return r;
}

PriceResult mixing_from_samples(const AvgVarSamples& samples, double spot, double strike, double rate,
                                double maturity) {
    if (samples.values.empty()) throw std::invalid_argument("mixing_from_samples: empty sample");
    const double discount = std::exp(-rate * maturity);
    std::vector<double> values(samples.values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = discount * conditional_call_value(spot, strike, rate, maturity, std::sqrt(samples.values[i]));
    const auto est = mean_and_stderr(values);
    PriceResult r;
    r.price = est.mean;
    r.std_error = est.std_error;
    r.method = PricingMethod::McMixing;
    r.n_paths = samples.meta.n_paths;
    r.seed = samples.meta.seed;
    return r;
}

PriceResult mc_price_mixing(const ModelParams& params, const OptionSpec& option, const McSettings& settings) {
    params.validate();
    option.validate();
    require_paths(settings);
    if (!params.measure.is_minimal_uncorrelated())
        throw MethodNotApplicable("mc-mixing requires rho = 0 and nu identically zero");
    const auto& mk = params.market;
    auto samples = sample_avg_var(params.ou, params.vol, option.maturity, settings.n_paths, settings.grid_n,
                                  settings.seed, settings.workers, settings.mirrored);
    if (settings.antithetic) {
        const auto twin = sample_avg_var(params.ou, params.vol, option.maturity, settings.n_paths, settings.grid_n,
                                         settings.seed, settings.workers, !settings.mirrored);
        const double discount = std::exp(-mk.rate * option.maturity);
        std::vector<double> values(settings.n_paths);
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double a = conditional_call_value(mk.spot, option.strike, mk.rate, option.maturity,
                                                    std::sqrt(samples.values[i]));
            const double b = conditional_call_value(mk.spot, option.strike, mk.rate, option.maturity,
                                                    std::sqrt(twin.values[i]));
            values[i] = discount * 0.5 * (a + b);
        }
        const auto est = mean_and_stderr(values);
        PriceResult r;
        r.price = est.mean;
        r.std_error = est.std_error;
        r.method = PricingMethod::McMixing;
        r.n_paths = settings.n_paths;
        r.seed = settings.seed;
        return r;
    }
    return mixing_from_samples(samples, mk.spot, option.strike, mk.rate, option.maturity);
}

MartingaleReport martingale_check(const ModelParams& params, const OptionSpec& option, const McSettings& settings,
                                  const std::vector<double>& t_checkpoints) {
    params.validate();
    option.validate();
    require_paths(settings);
    if (!params.measure.is_minimal_uncorrelated())
        throw MethodNotApplicable("martingale_check requires rho = 0 and nu identically zero");
    const TimeGrid grid = TimeGrid::uniform(option.maturity, settings.grid_n);
    const OUStepper stepper(params.ou, grid);

    std::vector<std::size_t> index;
    for (double t : t_checkpoints) {
        if (t < 0.0 || t > option.maturity) throw std::invalid_argument("martingale_check: checkpoint outside [0, T]");
        index.push_back(static_cast<std::size_t>(std::lround(t / option.maturity * static_cast<double>(grid.steps()))));
    }
    const std::size_t n_checks = index.size();
    std::vector<double> x(settings.n_paths * n_checks);
    parallel_for(settings.n_paths, settings.workers, [&](std::size_t p) {
        thread_local std::vector<double> y;
        y.resize(grid.size());
        NormalStream w(settings.seed, StreamTag::OuDriver, p, settings.mirrored);
        NormalStream b(settings.seed, StreamTag::PriceDriver, p, settings.mirrored);
        stepper.simulate(w, y);
        std::vector<double> log_x(grid.size());
        log_x[0] = 0.0;
        for (std::size_t i = 0; i < grid.steps(); ++i) {
            const double dt = grid[i + 1] - grid[i];
            const double sigma = params.vol(y[i]);
            log_x[i + 1] = log_x[i] + sigma * std::sqrt(dt) * b.next() - 0.5 * sigma * sigma * dt;
        }
        for (std::size_t c = 0; c < n_checks; ++c)
            x[p * n_checks + c] = index[c] == 0 ? params.market.spot : params.market.spot * std::exp(log_x[index[c]]);
    });

    MartingaleReport report{params.market.spot, {}, true};
    std::vector<double> column(settings.n_paths);
    for (std::size_t c = 0; c < n_checks; ++c) {
        for (std::size_t p = 0; p < settings.n_paths; ++p) column[p] = x[p * n_checks + c];
        const auto est = mean_and_stderr(column);
        const double dev = std::fabs(est.mean - params.market.spot);
        const bool pass = est.std_error > 0.0 ? dev < 3.0 * est.std_error : dev == 0.0;
        report.checkpoints.push_back({grid[index[c]], est.mean, est.std_error, pass});
        report.pass = report.pass && pass;
    }
    return report;
}

DensityReport density_check(const ModelParams& params, double maturity, const McSettings& settings) {
    params.validate();
    require_paths(settings);
    if (!(maturity > 0.0)) throw std::invalid_argument("density_check: maturity > 0 required");
    const auto bounds = vol_bounds(params.vol);
    const double excess = params.market.rate - params.market.drift;
    const double nu = params.measure.nu_value();
    const double rho = params.measure.rho;
    const double rho_bar = std::sqrt(std::max(0.0, 1.0 - rho * rho));

    DensityReport report{};
    report.novikov_exponent_bound = 0.5 * maturity * (excess * excess / (bounds.lo * bounds.lo) + nu * nu);
    report.novikov_satisfied = std::isfinite(report.novikov_exponent_bound);
    const double c2 = bounds.hi * bounds.hi;
    report.sigma2x2_bound = c2 * params.market.spot * params.market.spot * std::expm1(c2 * maturity);
    report.identically_one = excess == 0.0 && nu == 0.0;

    const TimeGrid grid = TimeGrid::uniform(maturity, settings.grid_n);
    std::vector<double> decay(grid.steps()), step_sd(grid.steps());
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        const double dt = grid[i + 1] - grid[i];
        decay[i] = std::exp(-params.ou.alpha * dt);
        step_sd[i] = std::sqrt(ou_variance(params.ou, dt));
    }

    std::vector<double> values(settings.n_paths);
    parallel_for(settings.n_paths, settings.workers, [&](std::size_t p) {
        NormalStream b(settings.seed, StreamTag::PriceDriver, p, settings.mirrored);
        NormalStream z(settings.seed, StreamTag::Auxiliary, p, settings.mirrored);
        double y = params.ou.y0;
        double log_l = 0.0;
        for (std::size_t i = 0; i < grid.steps(); ++i) {
            const double dt = grid[i + 1] - grid[i];
            const double zb = b.next();
            const double zz = z.next();
            const double theta = excess / params.vol(y);
            log_l += std::sqrt(dt) * (theta * zb + nu * zz) - 0.5 * (theta * theta + nu * nu) * dt;
            // Objective-measure OU step driven by W = rho B + sqrt(1 - rho^2) Z.
            y = y * decay[i] + step_sd[i] * (rho * zb + rho_bar * zz);
        }
        values[p] = std::exp(log_l);
    });
    const auto est = mean_and_stderr(values);
    report.mean_density = est.mean;
    report.std_error = est.std_error;
    const double dev = std::fabs(est.mean - 1.0);
    report.pass = est.std_error > 0.0 ? dev < 3.0 * est.std_error : dev == 0.0;
    return report;
}

}  // namespace ousv
