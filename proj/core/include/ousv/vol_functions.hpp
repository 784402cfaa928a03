#pragma once

// Volatility functions sigma(y), all bounded in [c, C] with c > 0.

#include <string_view>

namespace ousv {

enum class VolFamily { Constant, ExpClamped, SigmoidAffine };

std::string_view to_string(VolFamily family);
VolFamily vol_family_from_string(std::string_view name);

struct VolBounds {
    double lo;  // c = inf sigma
    double hi;  // C = sup sigma
};

class VolSpec {
public:
    /// sigma(y) = sigma0
    static VolSpec constant(double sigma0);
    /// sigma(y) = clamp(a e^{b y}, lo, hi)
    static VolSpec exp_clamped(double a, double b, double lo, double hi);
    /// sigma(y) = lo + (hi - lo) / (1 + e^{-y})
    static VolSpec sigmoid_affine(double lo, double hi);

    VolFamily family() const noexcept { return family_; }
    double sigma0() const noexcept { return sigma0_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    double operator()(double y) const noexcept;

    bool operator==(const VolSpec&) const = default;

private:
    VolSpec() = default;

    VolFamily family_ = VolFamily::Constant;
    double sigma0_ = 0.0;
    double a_ = 0.0;
    double b_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
};

double vol_eval(const VolSpec& v, double y) noexcept;
VolBounds vol_bounds(const VolSpec& v) noexcept;

}  // namespace ousv
