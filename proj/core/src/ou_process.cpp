#include "ousv/ou_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ousv/errors.hpp"

namespace ousv {

void OUParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("ou.alpha: alpha > 0 required");
    if (!(k_vol >= 0.0) || !std::isfinite(k_vol)) throw std::invalid_argument("ou.k_vol: k_vol >= 0 required");
    if (!std::isfinite(y0)) throw std::invalid_argument("ou.y0: must be finite");
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw std::invalid_argument("TimeGrid: at least 2 points required");
    if (times_.front() != 0.0) throw std::invalid_argument("TimeGrid: first point must be 0");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("TimeGrid: times must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t n_steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid::uniform: horizon > 0 required");
    if (n_steps < 1) throw std::invalid_argument("TimeGrid::uniform: at least one step required");
    std::vector<double> t(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i)
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(n_steps);
    t.back() = horizon;
    return TimeGrid(std::move(t));
}

double ou_mean(const OUParams& p, double t) {
    if (t < 0.0) throw DomainError("ou_mean: t >= 0 required");
    return p.y0 * std::exp(-p.alpha * t);
}

double ou_variance(const OUParams& p, double t) {
    if (t < 0.0) throw DomainError("ou_variance: t >= 0 required");
    return p.k_vol * p.k_vol / (2.0 * p.alpha) * -std::expm1(-2.0 * p.alpha * t);
}

double ou_covariance(const OUParams& p, double s, double t) {
    if (s < 0.0 || t < 0.0) throw DomainError("ou_covariance: s, t >= 0 required");
    if (s == t) return ou_variance(p, t);
    const double lo = std::min(s, t);
    return p.k_vol * p.k_vol / (2.0 * p.alpha) * std::exp(-p.alpha * (s + t)) *
           std::expm1(2.0 * p.alpha * lo);
}

OUStepper::OUStepper(const OUParams& p, const TimeGrid& grid)
    : params_(p), times_(grid.times().begin(), grid.times().end()) {
    p.validate();
    decay_.resize(grid.steps());
    step_sd_.resize(grid.steps());
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        const double dt = grid[i + 1] - grid[i];
        decay_[i] = std::exp(-p.alpha * dt);
        step_sd_[i] = std::sqrt(ou_variance(p, dt));
    }
}

void OUStepper::simulate(NormalStream& normals, std::span<double> out) const {
    double y = params_.y0;
    out[0] = y;
    if (params_.k_vol == 0.0) {
        // Deterministic decay; no draws consumed.
        for (std::size_t i = 1; i < times_.size(); ++i) out[i] = params_.y0 * std::exp(-params_.alpha * times_[i]);
        return;
    }
    for (std::size_t i = 0; i < decay_.size(); ++i) {
        y = y * decay_[i] + step_sd_[i] * normals.next();
        out[i + 1] = y;
    }
}

OUPath simulate_ou(const OUParams& p, const TimeGrid& grid, std::uint64_t seed,
                   std::uint64_t path_index) {
    OUStepper stepper(p, grid);
    NormalStream normals(seed, StreamTag::OuDriver, path_index);
    OUPath path{grid, std::vector<double>(grid.size())};
    stepper.simulate(normals, path.values);
    return path;
}

}  // namespace ousv
