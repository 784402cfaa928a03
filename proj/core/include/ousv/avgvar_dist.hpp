#pragma once

// The law of the averaged variance sigma_bar_0^2 = (1/T) int_0^T sigma^2(Y_s) ds:
// samples, empirical CDF, characteristic function (Monte Carlo and moment series),
// raw moments, and CDF recovery from a characteristic function.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ousv/ou_process.hpp"
#include "ousv/quadrature.hpp"
#include "ousv/vol_functions.hpp"

namespace ousv {

struct SampleMeta {
    std::uint64_t seed = 0;
    std::size_t n_paths = 0;
    std::size_t grid_n = 0;  // number of time steps
};

struct AvgVarSamples {
    std::vector<double> values;  // in path-index order
    SampleMeta meta;
};

/// n_paths draws of avg_var_forward over exact OU paths on a uniform grid_n-step grid.
/// Path i uses the (seed, OuDriver, i) stream, so the same seed reproduces the Y-paths of
/// the Monte Carlo pricers.
AvgVarSamples sample_avg_var(const OUParams& p, const VolSpec& v, double maturity, std::size_t n_paths,
                             std::size_t grid_n, std::uint64_t seed, unsigned workers = 1,
                             bool mirrored = false);

/// Fraction of samples strictly below x (O(n); use EmpiricalCdf for repeated queries).
double empirical_cdf(const AvgVarSamples& s, double x);

/// Sorted-sample CDF for repeated evaluation.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(const AvgVarSamples& s);

    double operator()(double x) const;
    double min() const { return sorted_.front(); }
    double max() const { return sorted_.back(); }
    /// Distinct sample values when there are at most max_atoms of them, else empty.
    std::vector<double> atoms(std::size_t max_atoms = 16) const;

private:
    std::vector<double> sorted_;
};

std::complex<double> char_fn_mc(const AvgVarSamples& s, double u);

struct MomentEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 for quadrature
};

struct MomentQuadrature {
    std::size_t time_nodes_m1 = 64;
    std::size_t gauss_hermite_m1 = 64;
    std::size_t nodes_m2 = 32;  // per dimension, time and space
};

/// Raw moment m_j by Gaussian quadrature over the OU finite-dimensional laws (j in {1, 2}).
/// When sigma_bar^2 is deterministic (k_vol = 0 or a constant sigma) any j is exact.
MomentEstimate moment_m(int j, const OUParams& p, const VolSpec& v, double maturity,
                        const MomentQuadrature& quad = {});

/// Sample j-th raw moment with its standard error.
MomentEstimate moment_m_mc(int j, const AvgVarSamples& s);

struct MomentVector {
    std::vector<double> m;          // m[0] = m_1, ..., m[J-1] = m_J
    std::vector<double> std_error;  // per moment; 0 where computed by quadrature
    double upper_bound = 0.0;       // C^2, sup of sigma_bar^2

    int order() const noexcept { return static_cast<int>(m.size()); }
};

/// m_1, m_2 by quadrature and m_3..m_J from samples (or exactly when deterministic).
MomentVector moment_vector(const OUParams& p, const VolSpec& v, double maturity, int order,
                           const AvgVarSamples* samples);

struct SeriesValue {
    std::complex<double> value;
    double remainder_bound;
};

/// Largest |u| with |u|^{J+1} C^{2(J+1)} / (J+1)! below tolerance.
double moment_trust_radius(const MomentVector& mv, double tolerance = 1e-6);

/// 1 + sum_j (iu)^j m_j / j!; throws TrustRadiusError beyond moment_trust_radius.
SeriesValue char_fn_moments(const MomentVector& mv, double u, double tolerance = 1e-6);

using CharacteristicFunction = std::function<std::complex<double>(double)>;

struct InversionSpec {
    double cutoff = 0.0;  // U; <= 0 means derive from the support
    std::size_t panels = 64;
    std::size_t nodes_per_panel = 16;
    double tolerance = 1e-3;  // maximum accepted truncation residual
    std::optional<double> support_lo;  // law of X lives in [support_lo, support_hi]
    std::optional<double> support_hi;
};

/// U = 200 / (hi - lo + 1e-6)
double default_inversion_cutoff(double support_lo, double support_hi);

/// InversionSpec with support [c^2, C^2] from the volatility bounds.
InversionSpec inversion_spec_for(const VolSpec& v);

struct InversionResult {
    double probability;
    double residual;  // truncation residual estimate |phi(U)| / U
};

/// Gil-Pelaez inversion F(x) = 1/2 - (1/pi) int_0^U Im(e^{-iux} phi(u)) / u du.
/// phi is evaluated once per quadrature node at construction.
class GilPelaezInverter {
public:
    GilPelaezInverter(const CharacteristicFunction& phi, InversionSpec spec);

    /// P(X < x), clamped to [0, 1]; 0 / 1 outside the declared support.
    double cdf(double x) const;

    /// Density of X + eps Z (Z standard normal) from the mollified inverse transform.
    double mollified_density(double y, double eps) const;

    double cutoff() const noexcept { return cutoff_; }
    double residual() const noexcept { return residual_; }
    const InversionSpec& spec() const noexcept { return spec_; }

private:
    InversionSpec spec_;
    double cutoff_ = 0.0;
    double residual_ = 0.0;
    std::vector<double> u_;
    std::vector<double> w_;
    std::vector<std::complex<double>> phi_;
};

/// One-shot inversion; throws AccuracyError when the residual exceeds spec.tolerance.
InversionResult cdf_from_charfn(const CharacteristicFunction& phi, double x, const InversionSpec& spec);

/// P(X + eps Z < x) = int_{-inf}^x f_eps(y) dy with f_eps from the mollified transform;
/// the y-integral is done numerically on panels across the mollified support.
class MollifiedCdf {
public:
    MollifiedCdf(const GilPelaezInverter& inverter, double eps);

    double operator()(double x) const;
    double eps() const noexcept { return eps_; }

private:
    const GilPelaezInverter* inverter_;
    double eps_;
    double y_lo_;
    double y_hi_;
    double width_;
    std::vector<double> cumulative_;  // integral up to each panel edge
};

}  // namespace ousv
