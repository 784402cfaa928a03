#include "ousv/conditional_bs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ousv/errors.hpp"

namespace ousv {

void OptionSpec::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike)) throw std::invalid_argument("option.strike: strike > 0 required");
    if (!(maturity > 0.0) || !std::isfinite(maturity))
        throw std::invalid_argument("option.maturity: maturity > 0 required");
}

void MarketParams::validate() const {
    if (!(spot > 0.0) || !std::isfinite(spot)) throw std::invalid_argument("market.spot: spot > 0 required");
    if (!std::isfinite(rate)) throw std::invalid_argument("market.rate: must be finite");
    if (!std::isfinite(drift)) throw std::invalid_argument("market.drift: must be finite");
}

double std_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double avg_var_forward(std::span<const double> times, std::span<const double> values, const VolSpec& v) {
    if (times.size() < 2) throw std::invalid_argument("avg_var_forward: grid needs at least 2 points");
    if (values.size() != times.size()) throw std::invalid_argument("avg_var_forward: path/grid length mismatch");
    if (v.family() == VolFamily::Constant) return v.sigma0() * v.sigma0();
    double prev = v(values[0]);
    prev *= prev;
    double sum = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        double cur = v(values[i]);
        cur *= cur;
        sum += 0.5 * (prev + cur) * (times[i] - times[i - 1]);
        prev = cur;
    }
    return sum / times.back();
}

double avg_var_forward(const OUPath& path, const VolSpec& v) {
    return avg_var_forward(path.grid.times(), path.values, v);
}

D1D2 bs_d1_d2(double spot, double strike, double rate, double maturity, double sigma_bar) {
    if (!(sigma_bar > 0.0)) throw DomainError("bs_d1_d2: degenerate volatility (sigma_bar must be > 0)");
    if (!(spot > 0.0) || !(strike > 0.0) || !(maturity > 0.0))
        throw DomainError("bs_d1_d2: spot, strike and maturity must be > 0");
    const double vol_sqrt_t = sigma_bar * std::sqrt(maturity);
    const double d1 =
        (std::log(spot) + (rate + 0.5 * sigma_bar * sigma_bar) * maturity - std::log(strike)) / vol_sqrt_t;
    return {d1, d1 - vol_sqrt_t};
}

double conditional_call_value(double spot, double strike, double rate, double maturity,
                              double sigma_bar) {
    const double forward = spot * std::exp(rate * maturity);
    if (sigma_bar == 0.0) return std::max(forward - strike, 0.0);
    const auto [d1, d2] = bs_d1_d2(spot, strike, rate, maturity, sigma_bar);
    const double value = forward * std_normal_cdf(d1) - strike * std_normal_cdf(d2);
    // Rounding can leak past the arbitrage bounds in the deep ITM/OTM tails.
    return std::clamp(value, std::max(forward - strike, 0.0), forward);
}

}  // namespace ousv
