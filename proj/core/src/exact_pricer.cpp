#include "ousv/exact_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ousv/conditional_bs.hpp"
#include "ousv/errors.hpp"
#include "ousv/mc_pricer.hpp"

namespace ousv {

CaseConstants case_constants(double spot, double strike, double rate, double maturity) {
    const double m = std::log(spot / strike) + rate * maturity;
    return {m, std::sqrt(2.0 * std::fabs(m))};
}

namespace {

// Roots of x^2 - 2 b x + c = 0 (b = half the root sum, c = product), computed without
// cancellation; the discriminant is clamped at 0 when `clamp` is set.
std::optional<RootPair> stable_roots(double b, double c, bool clamp) {
    double disc = b * b - c;
    if (disc < 0.0) {
        if (!clamp) return std::nullopt;
        disc = 0.0;
    }
    const double q = b + std::copysign(std::sqrt(disc), b);
    if (q == 0.0) return RootPair{0.0, 0.0};
    const double r1 = q;
    const double r2 = c / q;
    return r1 < r2 ? RootPair{r1, r2} : RootPair{r2, r1};
}

std::optional<RootPair> roots12(double s, const CaseConstants& cc, double maturity, bool clamp) {
    // (1/2) T x^2 - s sqrt(T) x + m = 0
    return stable_roots(s / std::sqrt(maturity), 2.0 * cc.m / maturity, clamp);
}

std::optional<RootPair> roots34(double s, const CaseConstants& cc, double maturity, bool clamp) {
    // (1/2) T x^2 + s sqrt(T) x - m = 0
    return stable_roots(-s / std::sqrt(maturity), -2.0 * cc.m / maturity, clamp);
}

}  // namespace

std::optional<RootPair> sigma_roots_12(double s, double spot, double strike, double rate, double maturity) {
    const auto cc = case_constants(spot, strike, rate, maturity);
    if (s * s * maturity - 2.0 * maturity * cc.m < 0.0) return std::nullopt;
    return roots12(s, cc, maturity, true);
}

std::optional<RootPair> sigma_roots_34(double s, double spot, double strike, double rate, double maturity) {
    const auto cc = case_constants(spot, strike, rate, maturity);
    if (s * s * maturity + 2.0 * maturity * cc.m < 0.0) return std::nullopt;
    return roots34(s, cc, maturity, true);
}

std::span<const double> breakpoint_quantile_levels() {
    static constexpr double levels[] = {0.0,  0.002, 0.01, 0.03, 0.06, 0.1,  0.15,  0.2,  0.3, 0.4, 0.5,
                                        0.6,  0.7,   0.8,  0.85, 0.9,  0.94, 0.97, 0.99, 0.998, 1.0};
    return levels;
}

namespace {

// Smallest v in [lo, hi] with cdf(v) >= p, by bisection.
template <class Cdf>
double quantile_by_bisection(const Cdf& cdf, double p, double lo, double hi) {
    for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) >= p ? hi : lo) = mid;
    }
    return hi;
}

std::vector<double> sample_breakpoints(const EmpiricalCdf& cdf, const AvgVarSamples& s) {
    std::vector<double> out = cdf.atoms();
    if (!out.empty()) return out;
    std::vector<double> sorted = s.values;
    std::sort(sorted.begin(), sorted.end());
    for (double p : breakpoint_quantile_levels()) {
        const auto idx = static_cast<std::size_t>(std::llround(p * static_cast<double>(sorted.size() - 1)));
        out.push_back(sorted[idx]);
    }
    return out;
}

template <class Cdf>
std::vector<double> cdf_breakpoints(const Cdf& cdf, double lo, double hi) {
    std::vector<double> out{lo, hi};
    if (!(hi > lo)) return out;
    for (double p : breakpoint_quantile_levels())
        if (p > 0.0 && p < 1.0) out.push_back(quantile_by_bisection(cdf, p, lo, hi));
    return out;
}

}  // namespace

EmpiricalCdfProvider::EmpiricalCdfProvider(std::shared_ptr<const AvgVarSamples> samples)
    : samples_(std::move(samples)), cdf_(*samples_), breakpoints_(sample_breakpoints(cdf_, *samples_)) {}

InversionCdfProvider::InversionCdfProvider(std::shared_ptr<const AvgVarSamples> samples, InversionSpec spec)
    : samples_(std::move(samples)),
      inverter_([s = samples_.get()](double u) { return char_fn_mc(*s, u); }, std::move(spec)) {
    if (inverter_.residual() > inverter_.spec().tolerance)
        throw AccuracyError("inversion: truncation residual " + std::to_string(inverter_.residual()) +
                                " exceeds tolerance " + std::to_string(inverter_.spec().tolerance),
                            inverter_.residual(), inverter_.spec().tolerance);
    const auto& spec_ref = inverter_.spec();
    if (spec_ref.support_lo) {
        breakpoints_ = cdf_breakpoints([this](double v) { return inverter_.cdf(v); }, *spec_ref.support_lo,
                                       *spec_ref.support_hi);
    }
}

MollifiedCdfProvider::MollifiedCdfProvider(const InversionCdfProvider& base, double eps)
    : cdf_(base.inverter(), eps) {
    const auto& spec = base.inverter().spec();
    breakpoints_ = cdf_breakpoints([this](double v) { return cdf_(v); }, std::max(0.0, *spec.support_lo - 8.0 * eps),
                                   *spec.support_hi + 8.0 * eps);
}

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;

struct Setup {
    double spot, strike, rate, maturity;
    CaseConstants cc;
    std::vector<double> breakpoints;
};

Setup make_setup(double spot, double strike, double rate, double maturity, const CdfProvider& cdf) {
    MarketParams{spot, rate, 0.0}.validate();
    OptionSpec{strike, maturity}.validate();
    Setup st{spot, strike, rate, maturity, case_constants(spot, strike, rate, maturity), {}};
    // sigma_i(s) = x exactly at s = d1(x) (i = 1, 2) or s = d2(x) (i = 3, 4).
    for (double a : cdf.variance_breakpoints()) {
        if (!(a > 0.0)) continue;
        const double x = std::sqrt(a);
        const double xs = x * std::sqrt(maturity);
        st.breakpoints.push_back((st.cc.m + 0.5 * a * maturity) / xs);
        st.breakpoints.push_back((st.cc.m - 0.5 * a * maturity) / xs);
    }
    return st;
}

using Integrand = std::function<double(double)>;

double weighted(const Setup& st, const Integrand& f, double a, double b, std::size_t n,
                EndpointKind at_a = EndpointKind::Smooth, EndpointKind at_b = EndpointKind::Smooth) {
    return integrate_segments([&](double s) { return f(s) * std::exp(-0.5 * s * s); }, a, b, st.breakpoints, n,
                              at_a, at_b);
}

// Undiscounted S e^{rT} E Phi(d1) - K E Phi(d2) from the simplified case formulas.
double simplified_value(const Setup& st, const CdfProvider& cdf, std::size_t n, double L) {
    const double T = st.maturity;
    const auto r12 = [&](double s) { return *roots12(s, st.cc, T, true); };
    const auto r34 = [&](double s) { return *roots34(s, st.cc, T, true); };
    const double forward = st.spot * std::exp(st.rate * T);
    const double k = st.cc.kappa;
    double e_phi_d1, e_phi_d2;
    if (st.cc.m >= 0.0) {
        e_phi_d1 = std_normal_cdf(k) +
                   kInvSqrt2Pi * weighted(st, [&](double s) {
                       const auto r = r12(s);
                       return cdf.prob_below(r.lower) + cdf.prob_above(r.upper);
                   }, k, L, n, EndpointKind::SqrtSingular);
        e_phi_d2 = std_normal_cdf(0.0) +
                   kInvSqrt2Pi * (weighted(st, [&](double s) { return cdf.prob_below(r34(s).upper); }, 0.0, L, n) -
                                  weighted(st, [&](double s) { return cdf.prob_above(r34(s).upper); }, -L, 0.0, n));
    } else {
        e_phi_d1 = 0.5 + kInvSqrt2Pi *
                             (weighted(st, [&](double s) { return cdf.prob_above(r12(s).upper); }, 0.0, L, n) -
                              weighted(st, [&](double s) { return cdf.prob_below(r12(s).upper); }, -L, 0.0, n));
        e_phi_d2 = std_normal_cdf(-k) -
                   kInvSqrt2Pi * weighted(st, [&](double s) {
                       const auto r = r34(s);
                       return cdf.prob_below(r.lower) + cdf.prob_above(r.upper);
                   }, -L, -k, n, EndpointKind::Smooth, EndpointKind::SqrtSingular);
    }
    return forward * e_phi_d1 - st.strike * e_phi_d2;
}

// The same quantity before dropping the terms that vanish for sigma_bar_0 >= 0.
double fullform_value(const Setup& st, const CdfProvider& cdf, std::size_t n, double L) {
    const double T = st.maturity;
    const auto r12 = [&](double s) { return *roots12(s, st.cc, T, true); };
    const auto r34 = [&](double s) { return *roots34(s, st.cc, T, true); };
    const double forward = st.spot * std::exp(st.rate * T);
    const double k = st.cc.kappa;

    const Integrand d1_upper = [&](double s) {  // P(< sigma_1) + P(> sigma_2)
        const auto r = r12(s);
        return cdf.prob_below(r.lower) + cdf.prob_above(r.upper);
    };
    const Integrand d1_lower = [&](double s) {  // P(< sigma_2) - P(< sigma_1)
        const auto r = r12(s);
        return cdf.prob_below(r.upper) - cdf.prob_below(r.lower);
    };
    const Integrand d2_upper = [&](double s) {  // P(< sigma_4) - P(< sigma_3)
        const auto r = r34(s);
        return cdf.prob_below(r.upper) - cdf.prob_below(r.lower);
    };
    const Integrand d2_lower = [&](double s) {  // P(< sigma_3) + P(> sigma_4)
        const auto r = r34(s);
        return cdf.prob_below(r.lower) + cdf.prob_above(r.upper);
    };

    double e_phi_d1, e_phi_d2;
    if (st.cc.m >= 0.0) {
        e_phi_d1 = std_normal_cdf(k) +
                   kInvSqrt2Pi * (weighted(st, d1_upper, k, L, n, EndpointKind::SqrtSingular) -
                                  weighted(st, d1_lower, -L, -k, n, EndpointKind::Smooth, EndpointKind::SqrtSingular));
        e_phi_d2 = 0.5 + kInvSqrt2Pi * (weighted(st, d2_upper, 0.0, L, n) - weighted(st, d2_lower, -L, 0.0, n));
    } else {
        e_phi_d1 = 0.5 + kInvSqrt2Pi * (weighted(st, d1_upper, 0.0, L, n) - weighted(st, d1_lower, -L, 0.0, n));
        e_phi_d2 = std_normal_cdf(-k) +
                   kInvSqrt2Pi * (weighted(st, d2_upper, k, L, n, EndpointKind::SqrtSingular) -
                                  weighted(st, d2_lower, -L, -k, n, EndpointKind::Smooth, EndpointKind::SqrtSingular));
    }
    return forward * e_phi_d1 - st.strike * e_phi_d2;
}

using ValueFn = double (*)(const Setup&, const CdfProvider&, std::size_t, double);

PriceResult assemble(ValueFn value_fn, PricingMethod method, double spot, double strike, double rate,
                     double maturity, const CdfProvider& cdf, const ExactQuadrature& quad) {
    if (quad.nodes < 2) throw std::invalid_argument("exact pricer: at least 2 quadrature nodes required");
    const Setup st = make_setup(spot, strike, rate, maturity, cdf);
    const double discount = std::exp(-rate * maturity);
    const double fine = discount * value_fn(st, cdf, quad.nodes, quad.truncation);
    const double coarse = discount * value_fn(st, cdf, quad.nodes / 2, quad.truncation);

    PriceResult result;
    result.method = method;
    result.price = fine;
    result.quad_error = std::fabs(fine - coarse);
    if (result.quad_error > quad.tolerance)
        throw AccuracyError("exact pricer: quadrature error estimate " + std::to_string(result.quad_error) +
                                " exceeds tolerance " + std::to_string(quad.tolerance),
                            result.quad_error, quad.tolerance);
    if (const AvgVarSamples* s = cdf.samples()) {
        const auto est = mixing_from_samples(*s, spot, strike, rate, maturity);
        result.std_error = est.std_error;
        result.n_paths = s->meta.n_paths;
        result.seed = s->meta.seed;
    }
    return result;
}

}  // namespace

PriceResult exact_price(double spot, double strike, double rate, double maturity, const CdfProvider& cdf,
                        const ExactQuadrature& quad) {
    const auto method = cdf.kind() == CdfProvider::Kind::Empirical ? PricingMethod::ExactEmpirical
                                                                   : PricingMethod::ExactInversion;
    return assemble(simplified_value, method, spot, strike, rate, maturity, cdf, quad);
}

PriceResult exact_price_fullform(double spot, double strike, double rate, double maturity,
                                 const CdfProvider& cdf, const ExactQuadrature& quad) {
    return assemble(fullform_value, PricingMethod::ExactFullform, spot, strike, rate, maturity, cdf, quad);
}

PriceResult exact_price_mollified(double spot, double strike, double rate, double maturity,
                                  const InversionCdfProvider& base, double eps, const ExactQuadrature& quad) {
    const MollifiedCdfProvider mollified(base, eps);
    return assemble(simplified_value, PricingMethod::ExactInversion, spot, strike, rate, maturity, mollified, quad);
}

}  // namespace ousv
