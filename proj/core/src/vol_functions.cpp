#include "ousv/vol_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ousv {

std::string_view to_string(VolFamily family) {
    switch (family) {
        case VolFamily::Constant: return "constant";
        case VolFamily::ExpClamped: return "exp_clamped";
        case VolFamily::SigmoidAffine: return "sigmoid_affine";
    }
    return "unknown";
}

VolFamily vol_family_from_string(std::string_view name) {
    if (name == "constant") return VolFamily::Constant;
    if (name == "exp_clamped") return VolFamily::ExpClamped;
    if (name == "sigmoid_affine") return VolFamily::SigmoidAffine;
    throw std::invalid_argument("vol.family: expected one of constant, exp_clamped, sigmoid_affine; got '" +
                                std::string(name) + "'");
}

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

VolSpec VolSpec::constant(double sigma0) {
    require(sigma0 > 0.0 && std::isfinite(sigma0), "vol.sigma0: sigma0 > 0 required");
    VolSpec v;
    v.family_ = VolFamily::Constant;
    v.sigma0_ = sigma0;
    v.lo_ = sigma0;
    v.hi_ = sigma0;
    return v;
}

VolSpec VolSpec::exp_clamped(double a, double b, double lo, double hi) {
    require(a > 0.0 && std::isfinite(a), "vol.a: a > 0 required");
    require(std::isfinite(b), "vol.b: must be finite");
    require(lo > 0.0 && std::isfinite(lo), "vol.lo: lo > 0 required");
    require(hi > lo && std::isfinite(hi), "vol.hi: hi > lo required");
    VolSpec v;
    v.family_ = VolFamily::ExpClamped;
    v.a_ = a;
    v.b_ = b;
    v.lo_ = lo;
    v.hi_ = hi;
    return v;
}

VolSpec VolSpec::sigmoid_affine(double lo, double hi) {
    require(lo > 0.0 && std::isfinite(lo), "vol.lo: lo > 0 required");
    require(hi > lo && std::isfinite(hi), "vol.hi: hi > lo required");
    VolSpec v;
    v.family_ = VolFamily::SigmoidAffine;
    v.lo_ = lo;
    v.hi_ = hi;
    return v;
}

double VolSpec::operator()(double y) const noexcept {
    switch (family_) {
        case VolFamily::Constant:
            return sigma0_;
        case VolFamily::ExpClamped:
            return std::clamp(a_ * std::exp(b_ * y), lo_, hi_);
        case VolFamily::SigmoidAffine:
            return lo_ + (hi_ - lo_) / (1.0 + std::exp(-y));
    }
    return sigma0_;
}

double vol_eval(const VolSpec& v, double y) noexcept { return v(y); }

VolBounds vol_bounds(const VolSpec& v) noexcept { return {v.lo(), v.hi()}; }

}  // namespace ousv
