#pragma once

#include <stdexcept>
#include <string>

namespace ousv {

// Input outside an operation's mathematical domain (negative time, sigma_bar = 0 in d1/d2, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical routine could not meet its configured accuracy.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double tolerance)
        : std::runtime_error(what), estimate_(estimate), tolerance_(tolerance) {}

    double estimate() const noexcept { return estimate_; }
    double tolerance() const noexcept { return tolerance_; }

private:
    double estimate_;
    double tolerance_;
};

// |u| beyond the radius where the truncated moment series is trusted.
class TrustRadiusError : public std::out_of_range {
public:
    TrustRadiusError(const std::string& what, double u, double u_max)
        : std::out_of_range(what), u_(u), u_max_(u_max) {}

    double u() const noexcept { return u_; }
    double u_max() const noexcept { return u_max_; }

private:
    double u_;
    double u_max_;
};

// Pricing method requested under a measure it does not support (e.g. rho != 0).
class MethodNotApplicable : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ousv
