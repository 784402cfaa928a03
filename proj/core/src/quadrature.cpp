#include "ousv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ousv {

QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / static_cast<double>(j);
            }
            dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadratureRule gauss_hermite(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_hermite: n must be positive");
    // Newton iteration on orthonormal Hermite polynomials (Numerical Recipes 4.6).
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    const double nd = static_cast<double>(n);
    double z = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(nd, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p1 = pim4, p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double jd = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * nd) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= 1e-15 * std::max(1.0, std::fabs(z))) break;
        }
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    // Ascending order.
    std::reverse(rule.nodes.begin(), rule.nodes.end());
    std::reverse(rule.weights.begin(), rule.weights.end());
    return rule;
}

namespace {

template <QuadratureRule (*Build)(std::size_t)>
const QuadratureRule& cached(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, Build(n)).first;
    return it->second;
}

}  // namespace

const QuadratureRule& cached_gauss_legendre(std::size_t n) { return cached<gauss_legendre>(n); }
const QuadratureRule& cached_gauss_hermite(std::size_t n) { return cached<gauss_hermite>(n); }

double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const auto& rule = cached_gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double integrate_segments(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breakpoints, std::size_t n, EndpointKind at_a,
                          EndpointKind at_b) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(b);

    double total = 0.0;
    const std::size_t pieces = cuts.size() - 1;
    for (std::size_t i = 0; i < pieces; ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        if (i == 0 && at_a == EndpointKind::SqrtSingular) {
            // s = lo + t^2, ds = 2t dt
            total += integrate_gl([&](double t) { return 2.0 * t * f(lo + t * t); }, 0.0,
                                  std::sqrt(hi - lo), n);
        } else if (i + 1 == pieces && at_b == EndpointKind::SqrtSingular) {
            total += integrate_gl([&](double t) { return 2.0 * t * f(hi - t * t); }, 0.0,
                                  std::sqrt(hi - lo), n);
        } else {
            total += integrate_gl(f, lo, hi, n);
        }
    }
    return total;
}

double gaussian_expectation(const std::function<double(double)>& g, double mean, double variance,
                            std::size_t n) {
    if (variance <= 0.0) return g(mean);
    const auto& rule = cached_gauss_hermite(n);
    const double scale = std::sqrt(2.0 * variance);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * g(mean + scale * rule.nodes[i]);
    return sum / std::sqrt(std::numbers::pi);
}

}  // namespace ousv
