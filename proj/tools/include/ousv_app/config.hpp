#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <ousv/conditional_bs.hpp>
#include <ousv/mc_pricer.hpp>
#include <ousv/ou_process.hpp>
#include <ousv/price_result.hpp>
#include <ousv/vol_functions.hpp>

namespace ousv::app {

/// Raised for malformed or invalid configuration text. key() names the first offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct NumericsConfig {
    std::size_t grid_n = 512;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
    std::size_t quad_nodes = 128;
    double inversion_U = 0.0;  // 0 selects the support-based default
    int moment_order = 12;
    unsigned workers = 1;
    bool antithetic = false;
    std::size_t cdf_samples = 100000;

    bool operator==(const NumericsConfig&) const = default;
};

struct OutputConfig {
    std::string path;  // empty: stdout
    std::string format = "csv";

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    MarketParams market;
    OptionSpec option;
    OUParams ou;
    VolSpec vol = VolSpec::constant(0.2);
    MeasureSpec measure;
    NumericsConfig numerics;
    OutputConfig output;
    std::optional<PricingMethod> method;

    ModelParams model() const { return {market, ou, vol, measure}; }
    McSettings mc_settings() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical `key = value` text; numbers carry 17 significant digits.
std::string render(const RunConfig& config);

/// FNV-1a 64 of render(config), as 16 hex digits.
std::string config_digest(const RunConfig& config);

/// Text for a double with 17 significant digits.
std::string format_number(double x);

}  // namespace ousv::app
