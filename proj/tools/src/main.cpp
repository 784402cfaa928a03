#include <CLI11.hpp>

#include <iostream>
#include <string>

#include <ousv/errors.hpp>

#include "ousv_app/commands.hpp"
#include "ousv_app/config.hpp"

int main(int argc, char** argv) {
    using namespace ousv;

    CLI::App app{"European call pricing under OU-driven stochastic volatility"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "Configuration file (key = value)")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Output CSV path (default: output.path or stdout)");
    auto* seed_opt = app.add_option("--seed", seed, "Override numerics.seed");

    app::RunOptions options;
    std::string method_name;

    auto* price = app.add_subcommand("price", "Price the call with one method");
    price->add_option("--method", method_name,
                      "mc-terminal | mc-mixing | exact-empirical | exact-inversion | exact-fullform");
    auto* dist = app.add_subcommand("dist", "Empirical and inverted CDF of the averaged variance");
    dist->add_option("--points", options.points, "Number of abscissae")->default_val(101);
    auto* paths = app.add_subcommand("sample-paths", "Write simulated OU paths and volatilities");
    paths->add_option("--paths", options.paths, "Number of paths")->default_val(10);
    auto* check = app.add_subcommand("check", "Martingale and density diagnostics");
    auto* compare = app.add_subcommand("compare", "Run every applicable method and tabulate z-scores");

    CLI11_PARSE(app, argc, argv);

    if (price->parsed()) options.command = app::Command::Price;
    if (dist->parsed()) options.command = app::Command::Dist;
    if (paths->parsed()) options.command = app::Command::SamplePaths;
    if (check->parsed()) options.command = app::Command::Check;
    if (compare->parsed()) options.command = app::Command::Compare;
    options.out = out_path;

    try {
        auto config = app::load_config(config_path);
        if (seed_opt->count()) config.numerics.seed = seed;
        if (!method_name.empty()) options.method = pricing_method_from_string(method_name);
        return app::run(options, config, std::cout, std::cerr);
    } catch (const app::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
