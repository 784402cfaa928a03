#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <ousv/avgvar_dist.hpp>
#include <ousv/exact_pricer.hpp>
#include <ousv/mc_pricer.hpp>

#include "ousv_app/config.hpp"

namespace ousv::app {

enum class Command { Price, Dist, SamplePaths, Check, Compare };

std::string_view to_string(Command c);

struct RunOptions {
    Command command = Command::Price;
    std::optional<PricingMethod> method;  // price: overrides the config's method
    std::string out;                      // overrides output.path
    std::size_t paths = 10;               // sample-paths
    std::size_t points = 101;             // dist
};

/// Prices one config with any method, drawing the averaged-variance sample set once.
class Pricer {
public:
    explicit Pricer(RunConfig config);

    const RunConfig& config() const noexcept { return config_; }

    /// Throws MethodNotApplicable when the method needs rho = 0 and nu = 0.
    PriceResult price(PricingMethod method);

    std::shared_ptr<const AvgVarSamples> cdf_samples();
    const InversionCdfProvider& inversion_provider();
    ExactQuadrature quadrature() const;

private:
    RunConfig config_;
    std::string digest_;
    std::shared_ptr<const AvgVarSamples> samples_;
    std::unique_ptr<InversionCdfProvider> inversion_;
};

bool method_applicable(PricingMethod method, const MeasureSpec& measure);

/// (a - b) / sqrt(se_a^2 + se_b^2 + qe_a^2 + qe_b^2); prices equal to 1e-10 relative give 0.
double z_score(const PriceResult& a, const PriceResult& b);

struct CompareRow {
    PricingMethod method_a;
    PricingMethod method_b;
    double price_a;
    double price_b;
    double stderr_a;
    double stderr_b;
    double z;
};

struct CompareReport {
    std::vector<PriceResult> results;
    std::vector<CompareRow> rows;
    bool pass;  // every |z| < 3
};

CompareReport compare(const RunConfig& config);

struct DistRow {
    double x;
    double cdf_empirical;
    double cdf_inversion;
};

std::vector<DistRow> distribution(const RunConfig& config, std::size_t points);

struct CheckReport {
    std::optional<MartingaleReport> martingale;  // absent unless rho = 0 and nu = 0
    DensityReport density;
    bool pass;
};

CheckReport check(const RunConfig& config);

std::string price_csv(const PriceResult& r);
std::string compare_csv(const CompareReport& r);
std::string dist_csv(const std::vector<DistRow>& rows);
std::string sample_paths_csv(const RunConfig& config, std::size_t paths);
std::string check_csv(const CheckReport& r);
std::string check_text(const RunConfig& config, const CheckReport& r);

/// --out, else output.path, else stdout (empty). OUSV_OUTPUT_DIR replaces the directory
/// and supplies "<command>.csv" when no file name is configured.
std::string resolve_output_path(Command command, const RunConfig& config, const std::string& cli_out);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

/// Runs a command; CSV goes to the resolved path or `out`, reports and errors to `log`.
/// Returns 0 on success, 3 when a diagnostic check fails; module errors propagate.
int run(const RunOptions& options, const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace ousv::app
