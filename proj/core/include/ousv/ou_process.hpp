#pragma once

// Ornstein-Uhlenbeck volatility driver dY = -alpha Y dt + k dW.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ousv/random.hpp"

namespace ousv {

struct OUParams {
    double alpha = 1.0;  // mean-reversion rate, > 0
    double k_vol = 0.0;  // diffusion coefficient, >= 0
    double y0 = 0.0;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    bool operator==(const OUParams&) const = default;
};

/// Strictly increasing time points starting at exactly 0.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    /// n_steps equal steps on [0, horizon].
    static TimeGrid uniform(double horizon, std::size_t n_steps);

    std::span<const double> times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    std::size_t steps() const noexcept { return times_.size() - 1; }
    double horizon() const noexcept { return times_.back(); }
    double operator[](std::size_t i) const noexcept { return times_[i]; }

private:
    std::vector<double> times_;
};

struct OUPath {
    TimeGrid grid;
    std::vector<double> values;
};

double ou_mean(const OUParams& p, double t);
double ou_variance(const OUParams& p, double t);
double ou_covariance(const OUParams& p, double s, double t);

/// Exact-transition stepper for a fixed grid: Y_{i+1} = Y_i e^{-alpha dt} + sd_i * xi.
class OUStepper {
public:
    OUStepper(const OUParams& p, const TimeGrid& grid);

    /// Fill out (size == grid size) with one path drawn from `normals`.
    void simulate(NormalStream& normals, std::span<double> out) const;

    const OUParams& params() const noexcept { return params_; }

private:
    OUParams params_;
    std::vector<double> times_;
    std::vector<double> decay_;
    std::vector<double> step_sd_;
};

/// One exact OU path; deterministic in (p, grid, seed, path_index).
OUPath simulate_ou(const OUParams& p, const TimeGrid& grid, std::uint64_t seed,
                   std::uint64_t path_index = 0);

}  // namespace ousv
