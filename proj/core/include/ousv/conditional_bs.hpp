#pragma once

// Black-Scholes value conditional on a frozen volatility path.

#include "ousv/ou_process.hpp"
#include "ousv/vol_functions.hpp"

namespace ousv {

struct OptionSpec {
    double strike = 100.0;
    double maturity = 1.0;

    void validate() const;
    bool operator==(const OptionSpec&) const = default;
};

struct MarketParams {
    double spot = 100.0;
    double rate = 0.0;
    double drift = 0.0;  // objective-measure drift; only the measure diagnostics use it

    void validate() const;
    bool operator==(const MarketParams&) const = default;
};

struct D1D2 {
    double d1;
    double d2;
};

/// Phi(x) via erfc; absolute error well below 1e-12.
double std_normal_cdf(double x) noexcept;

/// (1/T) * int_0^T sigma^2(Y_s) ds by the trapezoid rule on the path's grid.
double avg_var_forward(const OUPath& path, const VolSpec& v);

/// Same, over raw grid/value spans (no allocation; used by the samplers).
double avg_var_forward(std::span<const double> times, std::span<const double> values, const VolSpec& v);

/// Throws DomainError for sigma_bar <= 0.
D1D2 bs_d1_d2(double spot, double strike, double rate, double maturity, double sigma_bar);

/// Undiscounted E[(S_T - K)^+ | Y path] = S e^{rT} Phi(d1) - K Phi(d2).
/// sigma_bar == 0 gives the deterministic payoff max(S e^{rT} - K, 0).
double conditional_call_value(double spot, double strike, double rate, double maturity,
                              double sigma_bar);

}  // namespace ousv
