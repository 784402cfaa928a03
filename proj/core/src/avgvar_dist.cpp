#include "ousv/avgvar_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ousv/conditional_bs.hpp"
#include "ousv/errors.hpp"
#include "ousv/parallel.hpp"

namespace ousv {

AvgVarSamples sample_avg_var(const OUParams& p, const VolSpec& v, double maturity, std::size_t n_paths,
                             std::size_t grid_n, std::uint64_t seed, unsigned workers,
                             bool mirrored) {
    if (n_paths < 1) throw std::invalid_argument("sample_avg_var: n_paths >= 1 required");
    if (grid_n < 1) throw std::invalid_argument("sample_avg_var: grid_n >= 1 step required");
    const TimeGrid grid = TimeGrid::uniform(maturity, grid_n);
    const OUStepper stepper(p, grid);
    AvgVarSamples out;
    out.values.resize(n_paths);
    out.meta = {seed, n_paths, grid_n};
    parallel_for(n_paths, workers, [&](std::size_t i) {
        thread_local std::vector<double> y;
        y.resize(grid.size());
        NormalStream normals(seed, StreamTag::OuDriver, i, mirrored);
        stepper.simulate(normals, y);
        out.values[i] = avg_var_forward(grid.times(), y, v);
    });
    return out;
}

double empirical_cdf(const AvgVarSamples& s, double x) {
    if (s.values.empty()) throw std::invalid_argument("empirical_cdf: empty sample");
    const auto below = std::count_if(s.values.begin(), s.values.end(), [x](double v) { return v < x; });
    return static_cast<double>(below) / static_cast<double>(s.values.size());
}

EmpiricalCdf::EmpiricalCdf(const AvgVarSamples& s) : sorted_(s.values) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<double> EmpiricalCdf::atoms(std::size_t max_atoms) const {
    std::vector<double> distinct;
    for (double v : sorted_) {
        if (distinct.empty() || distinct.back() != v) {
            if (distinct.size() == max_atoms) return {};
            distinct.push_back(v);
        }
    }
    return distinct;
}

std::complex<double> char_fn_mc(const AvgVarSamples& s, double u) {
    if (s.values.empty()) throw std::invalid_argument("char_fn_mc: empty sample");
    if (u == 0.0) return {1.0, 0.0};
    double re = 0.0, im = 0.0;
    for (double x : s.values) {
        re += std::cos(u * x);
        im += std::sin(u * x);
    }
    const double n = static_cast<double>(s.values.size());
    return {re / n, im / n};
}

namespace {

bool deterministic_avg_var(const OUParams& p, const VolSpec& v) {
    return p.k_vol == 0.0 || v.family() == VolFamily::Constant;
}

double first_moment(const OUParams& p, const VolSpec& v, double T, const MomentQuadrature& q) {
    const auto sigma2 = [&](double y) {
        const double s = v(y);
        return s * s;
    };
    const double integral = integrate_gl(
        [&](double t) { return gaussian_expectation(sigma2, ou_mean(p, t), ou_variance(p, t), q.gauss_hermite_m1); },
        0.0, T, q.time_nodes_m1);
    return integral / T;
}

double second_moment(const OUParams& p, const VolSpec& v, double T, const MomentQuadrature& q) {
    const auto sigma2 = [&](double y) {
        const double s = v(y);
        return s * s;
    };
    const std::size_t n = q.nodes_m2;
    // E[sigma^2(Y_t1) sigma^2(Y_t2)], t1 < t2, via Y_t2 | Y_t1 ~ N(mu2 + rho (y1 - mu1), v(t2 - t1)).
    const auto joint = [&](double t1, double t2) {
        const double mu1 = ou_mean(p, t1);
        const double mu2 = ou_mean(p, t2);
        const double decay = std::exp(-p.alpha * (t2 - t1));
        const double cond_var = ou_variance(p, t2 - t1);
        return gaussian_expectation(
            [&](double y1) {
                return sigma2(y1) *
                       gaussian_expectation(sigma2, mu2 + decay * (y1 - mu1), cond_var, n);
            },
            mu1, ou_variance(p, t1), n);
    };
    const double triangle = integrate_gl(
        [&](double t2) { return integrate_gl([&](double t1) { return joint(t1, t2); }, 0.0, t2, n); }, 0.0, T, n);
    return 2.0 * triangle / (T * T);
}

}  // namespace

MomentEstimate moment_m(int j, const OUParams& p, const VolSpec& v, double maturity,
                        const MomentQuadrature& quad) {
    if (j < 1) throw std::invalid_argument("moment_m: order j >= 1 required");
    if (!(maturity > 0.0)) throw std::invalid_argument("moment_m: maturity > 0 required");
    p.validate();
    if (deterministic_avg_var(p, v)) {
        const double m1 = v.family() == VolFamily::Constant ? v.sigma0() * v.sigma0()
                                                            : first_moment(p, v, maturity, quad);
        return {std::pow(m1, j), 0.0};
    }
    if (j == 1) return {first_moment(p, v, maturity, quad), 0.0};
    if (j == 2) return {second_moment(p, v, maturity, quad), 0.0};
    throw std::invalid_argument("moment_m: quadrature mode supports j in {1, 2}; use moment_m_mc for j = " +
                                std::to_string(j));
}

MomentEstimate moment_m_mc(int j, const AvgVarSamples& s) {
    if (j < 1) throw std::invalid_argument("moment_m_mc: order j >= 1 required");
    if (s.values.empty()) throw std::invalid_argument("moment_m_mc: empty sample");
    const double n = static_cast<double>(s.values.size());
    double sum = 0.0, sum_sq = 0.0;
    for (double x : s.values) {
        const double xj = std::pow(x, j);
        sum += xj;
        sum_sq += xj * xj;
    }
    const double mean = sum / n;
    const double var = s.values.size() > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

MomentVector moment_vector(const OUParams& p, const VolSpec& v, double maturity, int order,
                           const AvgVarSamples* samples) {
    if (order < 1) throw std::invalid_argument("moment_vector: order >= 1 required");
    MomentVector mv;
    mv.upper_bound = v.hi() * v.hi();
    const bool exact = deterministic_avg_var(p, v);
    for (int j = 1; j <= order; ++j) {
        MomentEstimate est;
        if (exact || j <= 2) {
            est = moment_m(j, p, v, maturity);
        } else {
            if (samples == nullptr)
                throw std::invalid_argument("moment_vector: samples required for moments of order >= 3");
            est = moment_m_mc(j, *samples);
        }
        mv.m.push_back(est.value);
        mv.std_error.push_back(est.std_error);
    }
    return mv;
}

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

double moment_trust_radius(const MomentVector& mv, double tolerance) {
    const int next = mv.order() + 1;
    if (mv.upper_bound <= 0.0) return std::numeric_limits<double>::infinity();
    // |u|^{J+1} C^{2(J+1)} / (J+1)! = tol
    return std::exp((std::log(tolerance) + log_factorial(next)) / next) / mv.upper_bound;
}

SeriesValue char_fn_moments(const MomentVector& mv, double u, double tolerance) {
    const double u_max = moment_trust_radius(mv, tolerance);
    if (std::fabs(u) > u_max)
        throw TrustRadiusError("char_fn_moments: |u| = " + std::to_string(std::fabs(u)) +
                                   " exceeds trust radius " + std::to_string(u_max),
                               u, u_max);
    std::complex<double> sum{1.0, 0.0};
    std::complex<double> term{1.0, 0.0};  // (iu)^j / j!
    const std::complex<double> iu{0.0, u};
    for (int j = 1; j <= mv.order(); ++j) {
        term *= iu / static_cast<double>(j);
        sum += term * mv.m[j - 1];
    }
    const int next = mv.order() + 1;
    const double remainder =
        std::exp(next * std::log(std::fabs(u) * mv.upper_bound) - log_factorial(next));
    return {sum, u == 0.0 ? 0.0 : remainder};
}

double default_inversion_cutoff(double support_lo, double support_hi) {
    return 200.0 / (support_hi - support_lo + 1e-6);
}

InversionSpec inversion_spec_for(const VolSpec& v) {
    InversionSpec spec;
    spec.support_lo = v.lo() * v.lo();
    spec.support_hi = v.hi() * v.hi();
    return spec;
}

GilPelaezInverter::GilPelaezInverter(const CharacteristicFunction& phi, InversionSpec spec)
    : spec_(std::move(spec)) {
    if (spec_.support_lo.has_value() != spec_.support_hi.has_value())
        throw std::invalid_argument("InversionSpec: support needs both bounds");
    if (spec_.support_lo && *spec_.support_hi < *spec_.support_lo)
        throw std::invalid_argument("InversionSpec: support_hi < support_lo");
    cutoff_ = spec_.cutoff;
    if (!(cutoff_ > 0.0)) {
        if (!spec_.support_lo)
            throw std::invalid_argument("InversionSpec: cutoff U or a support is required");
        cutoff_ = default_inversion_cutoff(*spec_.support_lo, *spec_.support_hi);
    }
    if (spec_.panels == 0 || spec_.nodes_per_panel == 0)
        throw std::invalid_argument("InversionSpec: panels and nodes_per_panel must be positive");

    const auto& rule = cached_gauss_legendre(spec_.nodes_per_panel);
    const double width = cutoff_ / static_cast<double>(spec_.panels);
    u_.reserve(spec_.panels * rule.size());
    for (std::size_t k = 0; k < spec_.panels; ++k) {
        const double mid = (static_cast<double>(k) + 0.5) * width;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            u_.push_back(mid + 0.5 * width * rule.nodes[i]);
            w_.push_back(0.5 * width * rule.weights[i]);
        }
    }
    phi_.reserve(u_.size());
    for (double u : u_) phi_.push_back(phi(u));
    residual_ = std::abs(phi(cutoff_)) / cutoff_;
}

double GilPelaezInverter::cdf(double x) const {
    if (spec_.support_lo) {
        if (x <= *spec_.support_lo) return 0.0;
        if (x > *spec_.support_hi) return 1.0;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < u_.size(); ++k) {
        const double ux = u_[k] * x;
        // Im(e^{-iux} phi) = Im(phi) cos(ux) - Re(phi) sin(ux)
        sum += w_[k] * (phi_[k].imag() * std::cos(ux) - phi_[k].real() * std::sin(ux)) / u_[k];
    }
    return std::clamp(0.5 - sum / std::numbers::pi, 0.0, 1.0);
}

double GilPelaezInverter::mollified_density(double y, double eps) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < u_.size(); ++k) {
        const double uy = u_[k] * y;
        const double damp = std::exp(-0.5 * eps * eps * u_[k] * u_[k]);
        // Re(e^{-iuy} phi) = Re(phi) cos(uy) + Im(phi) sin(uy)
        sum += w_[k] * damp * (phi_[k].real() * std::cos(uy) + phi_[k].imag() * std::sin(uy));
    }
    return sum / std::numbers::pi;
}

InversionResult cdf_from_charfn(const CharacteristicFunction& phi, double x, const InversionSpec& spec) {
    const GilPelaezInverter inverter(phi, spec);
    if (inverter.residual() > spec.tolerance)
        throw AccuracyError("cdf_from_charfn: truncation residual " + std::to_string(inverter.residual()) +
                                " exceeds tolerance " + std::to_string(spec.tolerance),
                            inverter.residual(), spec.tolerance);
    return {inverter.cdf(x), inverter.residual()};
}

namespace {

constexpr std::size_t kMollifiedNodes = 8;

double panel_integral(const GilPelaezInverter& inv, double eps, double a, double b) {
    if (!(b > a)) return 0.0;
    return integrate_gl([&](double y) { return inv.mollified_density(y, eps); }, a, b, kMollifiedNodes);
}

}  // namespace

MollifiedCdf::MollifiedCdf(const GilPelaezInverter& inverter, double eps) : inverter_(&inverter), eps_(eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("MollifiedCdf: eps > 0 required");
    const auto& spec = inverter.spec();
    if (!spec.support_lo) throw std::invalid_argument("MollifiedCdf: inverter needs a declared support");
    y_lo_ = *spec.support_lo - 8.0 * eps;
    y_hi_ = *spec.support_hi + 8.0 * eps;
    const double spread = *spec.support_hi - *spec.support_lo;
    width_ = 0.5 * std::min(eps, spread > 0.0 ? spread / 32.0 : eps);
    const auto panels = static_cast<std::size_t>(std::ceil((y_hi_ - y_lo_) / width_));
    width_ = (y_hi_ - y_lo_) / static_cast<double>(panels);
    cumulative_.assign(panels + 1, 0.0);
    for (std::size_t k = 0; k < panels; ++k) {
        const double a = y_lo_ + width_ * static_cast<double>(k);
        cumulative_[k + 1] = cumulative_[k] + panel_integral(inverter, eps, a, a + width_);
    }
}

double MollifiedCdf::operator()(double x) const {
    if (x <= y_lo_) return 0.0;
    if (x >= y_hi_) return std::clamp(cumulative_.back(), 0.0, 1.0);
    const auto k = std::min(static_cast<std::size_t>((x - y_lo_) / width_), cumulative_.size() - 2);
    const double a = y_lo_ + width_ * static_cast<double>(k);
    return std::clamp(cumulative_[k] + panel_integral(*inverter_, eps_, a, x), 0.0, 1.0);
}

}  // namespace ousv
