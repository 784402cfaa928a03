#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <ousv/avgvar_dist.hpp>
#include <ousv/errors.hpp>

#include "support/oracles.hpp"

using namespace ousv;

namespace {

const OUParams kOu{1.0, 0.5, 0.0};
const VolSpec kExp = VolSpec::exp_clamped(0.2, 1.0, 0.05, 0.6);

class ExpClampedSamples : public ::testing::Test {
protected:
    static void SetUpTestSuite() { samples_ = new AvgVarSamples(sample_avg_var(kOu, kExp, 1.0, 100000, 512, 7)); }
    static void TearDownTestSuite() {
        delete samples_;
        samples_ = nullptr;
    }
    static const AvgVarSamples& samples() { return *samples_; }

private:
    static AvgVarSamples* samples_;
};

AvgVarSamples* ExpClampedSamples::samples_ = nullptr;

}  // namespace

TEST(SampleAvgVar, ConstantFamilyIsPointMass) {
    const auto s = sample_avg_var(kOu, VolSpec::constant(0.2), 1.0, 1000, 64, 3);
    ASSERT_EQ(s.values.size(), 1000u);
    for (double v : s.values) EXPECT_EQ(v, 0.2 * 0.2);
    EXPECT_EQ(s.meta.seed, 3u);
    EXPECT_EQ(s.meta.n_paths, 1000u);
    EXPECT_EQ(s.meta.grid_n, 64u);
}

TEST(SampleAvgVar, DeterministicPathGivesOneValue) {
    const auto s = sample_avg_var({1.0, 0.0, 0.5}, kExp, 1.0, 200, 512, 3);
    for (double v : s.values) EXPECT_EQ(v, s.values.front());
    EXPECT_NEAR(s.values.front() / oracle::kDeterministicAvgVar, 1.0, 1e-5);
}

TEST(SampleAvgVar, ReproducibleAndWorkerIndependent) {
    const auto a = sample_avg_var(kOu, kExp, 1.0, 2000, 64, 9, 1);
    const auto b = sample_avg_var(kOu, kExp, 1.0, 2000, 64, 9, 3);
    EXPECT_EQ(a.values, b.values);
}

TEST(SampleAvgVar, RejectsEmptyRequests) {
    EXPECT_THROW(sample_avg_var(kOu, kExp, 1.0, 0, 64, 1), std::invalid_argument);
    EXPECT_THROW(sample_avg_var(kOu, kExp, 1.0, 10, 0, 1), std::invalid_argument);
}

TEST_F(ExpClampedSamples, RespectsSquaredBoundsWithoutSaturation) {
    std::size_t saturated = 0;
    for (double v : samples().values) {
        EXPECT_GE(v, 0.05 * 0.05 - 1e-12);
        EXPECT_LE(v, 0.6 * 0.6 + 1e-12);
        saturated += v == 0.05 * 0.05 || v == 0.6 * 0.6;
    }
    EXPECT_EQ(saturated, 0u);
}

TEST_F(ExpClampedSamples, EmpiricalCdfIsValid) {
    const auto& s = samples();
    const EmpiricalCdf cdf(s);
    EXPECT_EQ(empirical_cdf(s, cdf.min()), 0.0);
    EXPECT_EQ(empirical_cdf(s, 0.0), 0.0);
    EXPECT_EQ(empirical_cdf(s, 1.0), 1.0);
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = 0.36 * i / 200.0;
        const double f = cdf(x);
        EXPECT_GE(f, prev);
        prev = f;
    }
    EXPECT_EQ(cdf(0.5 * (cdf.min() + cdf.max())), empirical_cdf(s, 0.5 * (cdf.min() + cdf.max())));
}

TEST(EmpiricalCdf, PointMassStep) {
    const auto s = sample_avg_var(kOu, VolSpec::constant(0.3), 1.0, 100, 16, 1);
    EXPECT_EQ(empirical_cdf(s, 0.09 - 1e-12), 0.0);
    EXPECT_EQ(empirical_cdf(s, 0.09), 0.0);
    EXPECT_EQ(empirical_cdf(s, 0.09 + 1e-12), 1.0);
    EXPECT_EQ(EmpiricalCdf(s).atoms(), std::vector<double>{0.09});
}

TEST_F(ExpClampedSamples, CharFnBasicProperties) {
    const auto& s = samples();
    EXPECT_EQ(char_fn_mc(s, 0.0), std::complex<double>(1.0, 0.0));
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-300.0, 300.0);
    for (int i = 0; i < 20; ++i) {
        const double x = u(rng);
        const auto a = char_fn_mc(s, x);
        const auto b = char_fn_mc(s, -x);
        EXPECT_LE(std::abs(a), 1.0 + 1e-15);
        EXPECT_NEAR(a.real(), b.real(), 1e-15);
        EXPECT_NEAR(a.imag(), -b.imag(), 1e-15);
    }
}

TEST(CharFnMc, PointMass) {
    const auto s = sample_avg_var(kOu, VolSpec::constant(0.2), 1.0, 50, 8, 1);
    for (double u : {-7.0, 0.3, 12.0, 250.0}) {
        const auto v = char_fn_mc(s, u);
        EXPECT_NEAR(v.real(), std::cos(0.04 * u), 1e-14);
        EXPECT_NEAR(v.imag(), std::sin(0.04 * u), 1e-14);
    }
}

TEST(MomentM, DeterministicCases) {
    for (int j = 1; j <= 5; ++j) EXPECT_NEAR(moment_m(j, kOu, VolSpec::constant(0.2), 1.0).value, std::pow(0.04, j), 1e-16);
    EXPECT_NEAR(moment_m(1, {1.0, 0.0, 0.5}, kExp, 1.0).value, oracle::kDeterministicAvgVar, 1e-9);
    EXPECT_THROW(moment_m(3, kOu, kExp, 1.0), std::invalid_argument);
    EXPECT_THROW(moment_m(0, kOu, kExp, 1.0), std::invalid_argument);
}

TEST_F(ExpClampedSamples, QuadratureMomentsMatchSampleMoments) {
    const auto q1 = moment_m(1, kOu, kExp, 1.0);
    const auto q2 = moment_m(2, kOu, kExp, 1.0);
    const auto s1 = moment_m_mc(1, samples());
    const auto s2 = moment_m_mc(2, samples());
    EXPECT_LT(std::fabs(q1.value - s1.value), 3.0 * s1.std_error);
    EXPECT_LT(std::fabs(q2.value - s2.value), 3.0 * s2.std_error);
    EXPECT_GE(q2.value, q1.value * q1.value);
}

TEST_F(ExpClampedSamples, MomentVectorInvariants) {
    const auto mv = moment_vector(kOu, kExp, 1.0, 12, &samples());
    ASSERT_EQ(mv.order(), 12);
    EXPECT_EQ(mv.upper_bound, 0.36);
    for (int j = 1; j <= 12; ++j) {
        EXPECT_GT(mv.m[j - 1], 0.0);
        EXPECT_LE(mv.m[j - 1], std::pow(0.36, j));
    }
    EXPECT_GE(mv.m[1], mv.m[0] * mv.m[0]);
    EXPECT_THROW(moment_vector(kOu, kExp, 1.0, 12, nullptr), std::invalid_argument);
}

TEST(CharFnMoments, ConstantMatchesExponentialSeries) {
    const auto v = VolSpec::constant(0.2);
    const auto mv = moment_vector(kOu, v, 1.0, 8, nullptr);
    EXPECT_EQ(char_fn_moments(mv, 0.0).value, std::complex<double>(1.0, 0.0));
    const double tol = 1e-5;
    ASSERT_GE(moment_trust_radius(mv, tol), 1.0 / 0.04);
    for (double u : {-25.0, -10.0, 1.0, 13.0, 25.0}) {
        const auto s = char_fn_moments(mv, u, tol);
        const std::complex<double> exact(std::cos(0.04 * u), std::sin(0.04 * u));
        EXPECT_LE(std::abs(s.value - exact), s.remainder_bound + 1e-15) << u;
    }
}

TEST(CharFnMoments, RejectsBeyondTrustRadius) {
    const auto mv = moment_vector(kOu, VolSpec::constant(0.2), 1.0, 8, nullptr);
    const double r = moment_trust_radius(mv);
    EXPECT_NO_THROW(char_fn_moments(mv, 0.99 * r));
    EXPECT_THROW(char_fn_moments(mv, 1.01 * r), TrustRadiusError);
    EXPECT_THROW(char_fn_moments(mv, -1.01 * r), TrustRadiusError);
}

TEST_F(ExpClampedSamples, CharFnMomentsAgreeWithMonteCarlo) {
    const auto mv = moment_vector(kOu, kExp, 1.0, 12, &samples());
    const double n = static_cast<double>(samples().values.size());
    for (double u : {0.5, 1.0, 2.0}) {
        ASSERT_LT(u, moment_trust_radius(mv));
        const auto series = char_fn_moments(mv, u);
        const auto mc = char_fn_mc(samples(), u);
        double vr = 0.0, vi = 0.0;
        for (double x : samples().values) {
            vr += std::pow(std::cos(u * x) - mc.real(), 2);
            vi += std::pow(std::sin(u * x) - mc.imag(), 2);
        }
        const double se_r = std::sqrt(vr / (n - 1.0) / n), se_i = std::sqrt(vi / (n - 1.0) / n);
        EXPECT_LT(std::fabs(series.value.real() - mc.real()), 3.0 * se_r + series.remainder_bound) << u;
        EXPECT_LT(std::fabs(series.value.imag() - mc.imag()), 3.0 * se_i + series.remainder_bound) << u;
    }
}

TEST(CdfFromCharfn, PointMass) {
    const double s2 = 0.04;
    const CharacteristicFunction phi = [&](double u) { return std::complex<double>(std::cos(s2 * u), std::sin(s2 * u)); };
    InversionSpec spec;
    spec.cutoff = 4000.0;
    const double delta = 0.1 * s2;
    EXPECT_LT(cdf_from_charfn(phi, s2 - delta, spec).probability, 0.01);
    EXPECT_GT(cdf_from_charfn(phi, s2 + delta, spec).probability, 0.99);
}

TEST(CdfFromCharfn, ResidualAboveToleranceThrows) {
    const CharacteristicFunction phi = [](double u) { return std::complex<double>(std::cos(0.04 * u), std::sin(0.04 * u)); };
    InversionSpec spec;
    spec.cutoff = 5.0;
    EXPECT_THROW(cdf_from_charfn(phi, 0.04, spec), AccuracyError);
}

TEST(CdfFromCharfn, GaussianCdf) {
    const CharacteristicFunction phi = [](double u) { return std::exp(std::complex<double>(-0.5 * u * u, 0.0)); };
    InversionSpec spec;
    spec.cutoff = 40.0;
    for (double x : {-2.0, -0.5, 0.0, 0.7, 1.9}) {
        const auto r = cdf_from_charfn(phi, x, spec);
        EXPECT_NEAR(r.probability, oracle::normal_cdf(x), 1e-8) << x;
    }
}

TEST_F(ExpClampedSamples, InversionReproducesEmpiricalCdf) {
    const auto& s = samples();
    const EmpiricalCdf emp(s);
    const GilPelaezInverter inv([&](double u) { return char_fn_mc(s, u); }, inversion_spec_for(kExp));
    EXPECT_LE(inv.residual(), inv.spec().tolerance);
    double sup = 0.0;
    for (int i = 0; i < 25; ++i) {
        const double x = emp.min() + (emp.max() - emp.min()) * (i + 0.5) / 25.0;
        sup = std::max(sup, std::fabs(inv.cdf(x) - emp(x)));
    }
    EXPECT_LT(sup, 0.01);
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = emp.min() + (emp.max() - emp.min()) * i / 99.0;
        const double f = inv.cdf(x);
        EXPECT_GE(f, prev);
        prev = f;
    }
}

TEST_F(ExpClampedSamples, MollifiedCdfApproachesInversion) {
    const auto& s = samples();
    const GilPelaezInverter inv([&](double u) { return char_fn_mc(s, u); }, inversion_spec_for(kExp));
    const EmpiricalCdf emp(s);
    double prev = INFINITY;
    for (double eps : {0.1, 0.03, 0.01, 0.003}) {
        const MollifiedCdf m(inv, eps);
        double l1 = 0.0;
        for (int i = 0; i < 25; ++i) {
            const double x = emp.min() + (emp.max() - emp.min()) * (i + 0.5) / 25.0;
            l1 += std::fabs(m(x) - inv.cdf(x)) / 25.0;
        }
        EXPECT_LT(l1, prev) << eps;
        prev = l1;
    }
    EXPECT_LT(prev, 0.01);
}
