#pragma once

// Call price from the law of sigma_bar_0 alone: the case split on
// m = ln(S/K) + rT, the root functions sigma_1..sigma_4, and outer integrals
// against the standard normal weight.
//
//   d1(x) > s  <=>  x < sigma_1(s) or x > sigma_2(s)   (when D12 = s^2 T - 2Tm >= 0)
//   d2(x) > s  <=>  sigma_3(s) < x < sigma_4(s)        (when D34 = s^2 T + 2Tm >= 0)
//
// so E Phi(d1) and E Phi(d2) reduce to integrals of P(sigma_bar_0 < sigma_i(s)).

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ousv/avgvar_dist.hpp"
#include "ousv/price_result.hpp"

namespace ousv {

struct CaseConstants {
    double m;      // ln(S/K) + rT
    double kappa;  // sqrt(2|m|): the boundary of the discriminant sign region

    bool in_the_money_forward() const noexcept { return m >= 0.0; }
};

CaseConstants case_constants(double spot, double strike, double rate, double maturity);

struct RootPair {
    double lower;
    double upper;
};

/// sigma_{1,2}(s) = s/sqrt(T) -/+ sqrt(s^2 T - 2Tm)/T, present iff the discriminant is >= 0.
std::optional<RootPair> sigma_roots_12(double s, double spot, double strike, double rate, double maturity);

/// sigma_{3,4}(s) = -s/sqrt(T) -/+ sqrt(s^2 T + 2Tm)/T, present iff the discriminant is >= 0.
std::optional<RootPair> sigma_roots_34(double s, double spot, double strike, double rate, double maturity);

/// Probabilities at which CDF providers report quantile breakpoints.
std::span<const double> breakpoint_quantile_levels();

/// Source of P(sigma_bar_0 < x) = P(sigma_bar_0^2 < x^2); 0 for x <= 0.
class CdfProvider {
public:
    enum class Kind { Empirical, Inversion, Mollified };

    virtual ~CdfProvider() = default;

    virtual Kind kind() const noexcept = 0;

    /// P(sigma_bar_0^2 < v)
    virtual double variance_cdf(double v) const = 0;

    /// Variance levels where P(sigma_bar_0^2 < v) changes character: atoms plus a
    /// quantile ladder of the law. The outer integrals are split where sigma_i(s)^2
    /// crosses one of them.
    virtual std::vector<double> variance_breakpoints() const { return {}; }

    /// Samples behind the provider, when it has any (used for the sampling error).
    virtual const AvgVarSamples* samples() const noexcept { return nullptr; }

    double prob_below(double x) const { return x <= 0.0 ? 0.0 : variance_cdf(x * x); }
    double prob_above(double x) const { return 1.0 - prob_below(x); }
};

class EmpiricalCdfProvider final : public CdfProvider {
public:
    explicit EmpiricalCdfProvider(std::shared_ptr<const AvgVarSamples> samples);

    Kind kind() const noexcept override { return Kind::Empirical; }
    double variance_cdf(double v) const override { return cdf_(v); }
    std::vector<double> variance_breakpoints() const override { return breakpoints_; }
    const AvgVarSamples* samples() const noexcept override { return samples_.get(); }

private:
    std::shared_ptr<const AvgVarSamples> samples_;
    EmpiricalCdf cdf_;
    std::vector<double> breakpoints_;
};

/// Gil-Pelaez inversion of the Monte Carlo characteristic function of the samples.
class InversionCdfProvider final : public CdfProvider {
public:
    InversionCdfProvider(std::shared_ptr<const AvgVarSamples> samples, InversionSpec spec);

    Kind kind() const noexcept override { return Kind::Inversion; }
    double variance_cdf(double v) const override { return inverter_.cdf(v); }
    std::vector<double> variance_breakpoints() const override { return breakpoints_; }
    const AvgVarSamples* samples() const noexcept override { return samples_.get(); }

    const GilPelaezInverter& inverter() const noexcept { return inverter_; }

private:
    std::shared_ptr<const AvgVarSamples> samples_;
    GilPelaezInverter inverter_;
    std::vector<double> breakpoints_;
};

/// Diagnostic: CDF of sigma_bar_0^2 + eps Z from the mollified (triple-integral) form.
class MollifiedCdfProvider final : public CdfProvider {
public:
    MollifiedCdfProvider(const InversionCdfProvider& base, double eps);

    Kind kind() const noexcept override { return Kind::Mollified; }
    double variance_cdf(double v) const override { return cdf_(v); }
    std::vector<double> variance_breakpoints() const override { return breakpoints_; }

private:
    MollifiedCdf cdf_;
    std::vector<double> breakpoints_;
};

struct ExactQuadrature {
    std::size_t nodes = 128;     // Gauss-Legendre nodes per segment
    double truncation = 8.0;     // |s| cut-off of the e^{-s^2/2} weight
    double tolerance = 1e-3;     // maximum accepted |V(n) - V(n/2)| (currency units)
};

/// Time-0 call price from the simplified case formulas.
PriceResult exact_price(double spot, double strike, double rate, double maturity, const CdfProvider& cdf,
                        const ExactQuadrature& quad = {});

/// Same price from the pre-simplification case formulas, including the
/// probability terms that vanish because sigma_bar_0 >= 0.
PriceResult exact_price_fullform(double spot, double strike, double rate, double maturity,
                                 const CdfProvider& cdf, const ExactQuadrature& quad = {});

/// Mollified price: exact_price over MollifiedCdfProvider(base, eps).
PriceResult exact_price_mollified(double spot, double strike, double rate, double maturity,
                                  const InversionCdfProvider& base, double eps, const ExactQuadrature& quad = {});

}  // namespace ousv
