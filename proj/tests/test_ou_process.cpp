#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <ousv/errors.hpp>
#include <ousv/ou_process.hpp>

#include "support/oracles.hpp"

using namespace ousv;

namespace {

struct Moments {
    double mean, var, mean_se, var_se;
};

Moments sample_moments(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double m = 0.0;
    for (double v : x) m += v;
    m /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = (v - m) * (v - m);
        m2 += d;
        m4 += d * d;
    }
    const double var = m2 / (n - 1.0);
    return {m, var, std::sqrt(var / n), std::sqrt((m4 / n - var * var) / n)};
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

}  // namespace

TEST(OuParams, Validation) {
    EXPECT_THROW((OUParams{0.0, 1.0, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((OUParams{-1.0, 1.0, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((OUParams{1.0, -0.1, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((OUParams{1.0, 1.0, NAN}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((OUParams{1.0, 0.0, 3.0}.validate()));
    try {
        OUParams{-1.0, 1.0, 0.0}.validate();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("alpha > 0"), std::string::npos);
    }
}

TEST(TimeGrid, Invariants) {
    EXPECT_THROW(TimeGrid({0.0}), std::invalid_argument);
    EXPECT_THROW(TimeGrid({0.1, 0.2}), std::invalid_argument);
    EXPECT_THROW(TimeGrid({0.0, 0.2, 0.2}), std::invalid_argument);
    const auto g = TimeGrid::uniform(2.0, 4);
    EXPECT_EQ(g.size(), 5u);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_EQ(g.horizon(), 2.0);
    EXPECT_DOUBLE_EQ(g[1], 0.5);
}

TEST(OuMean, Examples) {
    EXPECT_EQ(ou_mean({1.0, 1.0, 2.0}, 0.0), 2.0);
    EXPECT_LT(std::fabs(ou_mean({1.0, 1.0, 2.0}, 50.0)), 1e-20);
    EXPECT_NEAR(ou_mean({0.5, 1.0, 1.0}, 2.0), oracle::kExpMinusOne, 1e-15);
    EXPECT_THROW(ou_mean({1.0, 1.0, 1.0}, -1.0), DomainError);
}

TEST(OuVariance, Examples) {
    EXPECT_EQ(ou_variance({1.3, 0.7, 0.0}, 0.0), 0.0);
    EXPECT_EQ(ou_variance({1.3, 0.0, 0.0}, 5.0), 0.0);
    EXPECT_NEAR(ou_variance({1.0, 1.0, 0.0}, 1.0), oracle::kOuVarianceA1K1T1, 1e-15);
    EXPECT_THROW(ou_variance({1.0, 1.0, 1.0}, -1e-9), DomainError);
}

TEST(OuCovariance, Examples) {
    const OUParams p{1.0, 1.0, 0.0};
    EXPECT_NEAR(ou_covariance(p, 0.5, 1.0), oracle::kOuCovarianceA1K1, 1e-15);
    EXPECT_EQ(ou_covariance(p, 0.0, 1.0), 0.0);
    EXPECT_EQ(ou_covariance(p, 0.7, 0.7), ou_variance(p, 0.7));
    EXPECT_THROW(ou_covariance(p, -0.1, 1.0), DomainError);
}

TEST(OuCovariance, SymmetricAndPositiveSemidefinite) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> t(0.0, 5.0), a(0.05, 5.0), k(0.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const OUParams p{a(rng), k(rng), 0.0};
        const double s = t(rng), u = t(rng);
        const double c = ou_covariance(p, s, u);
        EXPECT_EQ(c, ou_covariance(p, u, s));
        const double vs = ou_variance(p, s), vu = ou_variance(p, u);
        EXPECT_GE(vs * vu - c * c, -1e-12 * std::max(1.0, vs * vu));
    }
}

TEST(SimulateOu, DeterministicWhenKVolZero) {
    const OUParams p{0.8, 0.0, 1.7};
    const auto grid = TimeGrid::uniform(2.0, 64);
    const auto path = simulate_ou(p, grid, 99);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(path.values[i], 1.7 * std::exp(-0.8 * grid[i]));
}

TEST(SimulateOu, BitReproducible) {
    const OUParams p{1.0, 0.5, 0.2};
    const auto grid = TimeGrid::uniform(1.0, 128);
    const auto a = simulate_ou(p, grid, 17, 3);
    const auto b = simulate_ou(p, grid, 17, 3);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, simulate_ou(p, grid, 18, 3).values);
}

TEST(SimulateOu, MarginalMomentsMatchClosedForm) {
    const OUParams p{0.5, 1.0, 1.0};
    const TimeGrid grid({0.0, 2.0});
    const std::size_t n = 1000000;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = simulate_ou(p, grid, 1, i).values.back();
    const auto m = sample_moments(y);
    EXPECT_LT(std::fabs(m.mean - oracle::kExpMinusOne), 3.0 * m.mean_se);
    EXPECT_LT(std::fabs(m.var - ou_variance(p, 2.0)), 3.0 * m.var_se);
}

TEST(SimulateOu, VarianceAtOneMatchesClosedForm) {
    const OUParams p{1.0, 1.0, 0.0};
    const TimeGrid grid({0.0, 0.25, 1.0});
    const std::size_t n = 1000000;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = simulate_ou(p, grid, 4, i).values.back();
    const auto m = sample_moments(y);
    EXPECT_LT(std::fabs(m.var - oracle::kOuVarianceA1K1T1), 3.0 * m.var_se);
}

TEST(SimulateOu, SampleCovarianceMatchesClosedForm) {
    const OUParams p{1.0, 1.0, 0.0};
    const TimeGrid grid({0.0, 0.5, 1.0});
    const std::size_t n = 1000000;
    std::vector<double> prod(n);
    double ma = 0.0, mb = 0.0;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto path = simulate_ou(p, grid, 8, i);
        a[i] = path.values[1];
        b[i] = path.values[2];
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    for (std::size_t i = 0; i < n; ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
    const auto m = sample_moments(prod);
    EXPECT_LT(std::fabs(m.mean - oracle::kOuCovarianceA1K1), 3.0 * m.mean_se);
}

TEST(SimulateOu, RefinedGridHasSameTerminalLaw) {
    const OUParams p{1.0, 0.5, 0.3};
    const auto coarse = TimeGrid::uniform(1.0, 4);
    const auto fine = TimeGrid::uniform(1.0, 64);
    const std::size_t n = 100000;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = simulate_ou(p, coarse, 21, i).values.back();
        b[i] = simulate_ou(p, fine, 22, i).values.back();
    }
    const double critical = 1.628 * std::sqrt(2.0 / static_cast<double>(n));
    EXPECT_LT(ks_statistic(a, b), critical);
}

TEST(SimulateOu, SmallKVolApproachesDeterministicPath) {
    const auto grid = TimeGrid::uniform(1.0, 32);
    const auto exact = simulate_ou({1.0, 0.0, 1.0}, grid, 2);
    double prev = INFINITY;
    for (double k : {1e-1, 1e-3, 1e-6}) {
        const auto path = simulate_ou({1.0, k, 1.0}, grid, 2);
        double dev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, std::fabs(path.values[i] - exact.values[i]));
        EXPECT_LT(dev, prev);
        prev = dev;
    }
    EXPECT_LT(prev, 1e-5);
}
