#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ousv {

/// Nodes and weights of a fixed rule on its reference domain.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Legendre on [-1, 1]. Nodes are strictly interior.
QuadratureRule gauss_legendre(std::size_t n);

/// Gauss-Hermite for weight exp(-x^2) on the real line (weights sum to sqrt(pi)).
QuadratureRule gauss_hermite(std::size_t n);

/// Cached rules; returned references stay valid for the program lifetime.
const QuadratureRule& cached_gauss_legendre(std::size_t n);
const QuadratureRule& cached_gauss_hermite(std::size_t n);

/// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t n);

/// Endpoint behaviour for integrate_segments.
enum class EndpointKind {
    Smooth,
    SqrtSingular,  // integrand behaves like sqrt(s - endpoint)
};

/// Integral of f over [a, b], split at the breakpoints lying strictly inside (a, b),
/// with an n-point Gauss-Legendre rule per piece. A square-root singular endpoint is
/// removed by the substitution s = endpoint +/- t^2 on its adjacent piece.
double integrate_segments(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breakpoints, std::size_t n,
                          EndpointKind at_a = EndpointKind::Smooth,
                          EndpointKind at_b = EndpointKind::Smooth);

/// Expectation of g(Y) for Y ~ Normal(mean, variance) using an n-point Gauss-Hermite rule.
double gaussian_expectation(const std::function<double(double)>& g, double mean, double variance,
                            std::size_t n);

}  // namespace ousv
