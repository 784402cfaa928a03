#pragma once

// Monte Carlo oracles (terminal payoff and conditional mixing) and numerical
// checks of the risk-neutral construction (density process, martingale property).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ousv/avgvar_dist.hpp"
#include "ousv/conditional_bs.hpp"
#include "ousv/ou_process.hpp"
#include "ousv/price_result.hpp"
#include "ousv/vol_functions.hpp"

namespace ousv {

/// Market price of volatility risk and the B/W correlation.
struct MeasureSpec {
    enum class Nu { IdenticallyZero, Constant };

    Nu nu_kind = Nu::IdenticallyZero;
    double nu = 0.0;  // used when nu_kind == Constant
    double rho = 0.0;

    /// rho = 0 and nu identically zero: the minimal martingale measure with independent drivers.
    bool is_minimal_uncorrelated() const noexcept { return rho == 0.0 && nu_kind == Nu::IdenticallyZero; }
    double nu_value() const noexcept { return nu_kind == Nu::Constant ? nu : 0.0; }

    void validate() const;
    bool operator==(const MeasureSpec&) const = default;
};

struct ModelParams {
    MarketParams market;
    OUParams ou;
    VolSpec vol = VolSpec::constant(0.2);
    MeasureSpec measure;

    void validate() const;
};

struct McSettings {
    std::size_t n_paths = 100000;
    std::size_t grid_n = 512;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool antithetic = false;  // average each draw with its sign-flipped twin
    bool mirrored = false;    // negate every Gaussian draw
};

enum class Payoff { Call, Put };

/// Simulates ln S_T = ln S + rT + sum sigma(Y_i) dB_i - 1/2 sum sigma^2(Y_i) dt and averages
/// the discounted payoff. With rho != 0 the OU driver is Euler-stepped under the
/// risk-neutral drift on a grid twice as fine and the result is flagged experimental.
PriceResult mc_price_terminal(const ModelParams& params, const OptionSpec& option, const McSettings& settings,
                              Payoff payoff = Payoff::Call);

/// e^{-rT} E[conditional_call_value(sigma_bar_0)] over exact OU paths. Requires rho = 0, nu = 0.
PriceResult mc_price_mixing(const ModelParams& params, const OptionSpec& option, const McSettings& settings);

/// Mixing estimator over already drawn averaged variances.
PriceResult mixing_from_samples(const AvgVarSamples& samples, double spot, double strike, double rate,
                                double maturity);

struct CheckpointStat {
    double t;
    double mean;
    double std_error;
    bool pass;
};

struct MartingaleReport {
    double spot;
    std::vector<CheckpointStat> checkpoints;
    bool pass;
};

/// Sample mean of e^{-rt} S_t at each checkpoint (snapped to the nearest grid point);
/// PASS iff |mean - S| < 3 stderr everywhere (stderr 0 requires exact equality).
MartingaleReport martingale_check(const ModelParams& params, const OptionSpec& option, const McSettings& settings,
                                  const std::vector<double>& t_checkpoints);

struct DensityReport {
    double novikov_exponent_bound;  // 1/2 T ((r - mu)^2 / c^2 + nu^2)
    bool novikov_satisfied;         // bound finite
    double mean_density;            // sample mean of L_T
    double std_error;
    bool identically_one;           // mu = r and nu = 0: L_T == 1 exactly
    bool pass;                      // |mean - 1| < 3 stderr (or identically one)
    double sigma2x2_bound;          // C^2 S^2 (e^{C^2 T} - 1) >= E int sigma^2 X^2 ds
};

/// Girsanov density L_T simulated under the objective measure.
DensityReport density_check(const ModelParams& params, double maturity, const McSettings& settings);

}  // namespace ousv
