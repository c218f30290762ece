#include <cmath>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "jkcov/baselines.hpp"
#include "jkcov/error.hpp"
#include "jkcov/linalg.hpp"
#include "jkcov/simgen.hpp"

using namespace jkcov;

TEST(SampleEstimator, AliasOfSampleCovariance) {
    DataMatrix x(2, 2, {1, 0, -1, 0});
    auto s = sample_estimator(x, false);
    EXPECT_EQ(s(0, 0), 1.0);
    EXPECT_EQ(s(1, 1), 0.0);
    auto y = testutil::gaussian_data(3, 2, 4);
    EXPECT_EQ(sample_estimator(y, true), sample_covariance(y, true));
    DataMatrix c(2, 2, {3, 3, 3, 3});
    const auto zero = sample_estimator(c, true);
    for (double v : zero.packed()) EXPECT_EQ(v, 0.0);
}

TEST(LinearShrinkage, ScaledIdentityIsFixed) {
    // Rows +-e_j: sample covariance (uncentred) is I/2 exactly.
    DataMatrix x(4, 2, {1, 0, -1, 0, 0, 1, 0, -1});
    auto r = linear_shrinkage_detailed(x, false);
    EXPECT_EQ(r.estimate, sample_covariance(x, false));
    EXPECT_DOUBLE_EQ(r.target_scale, 0.5);
}

TEST(LinearShrinkage, LargeSampleBarelyShrinks) {
    std::vector<double> d{4.0, 1.0};
    auto x = sample_gaussian(SymmetricMatrix::diagonal(d), 5000, 3);
    auto r = linear_shrinkage_detailed(x, false);
    EXPECT_LT(r.intensity, 0.1);
    EXPECT_LT(frobenius_distance(r.estimate, sample_covariance(x, false)), 0.1);
}

TEST(LinearShrinkage, HighDimensionShrinksHard) {
    auto x = testutil::gaussian_data(5, 50, 8);
    auto r = linear_shrinkage_detailed(x, false);
    EXPECT_GT(r.intensity, 0.5);
    EXPECT_GT(min_eigenvalue(r.estimate), 0.0);
}

TEST(LinearShrinkage, IntensityFormula) {
    auto x = testutil::gaussian_data(12, 4, 21);
    const std::size_t n = 12, p = 4;
    auto s = sample_covariance(x, false);
    const double mu = s.trace() / p;
    double d2 = 0.0;
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k) {
            const double t = s(j, k) - (j == k ? mu : 0.0);
            d2 += t * t;
        }
    d2 /= p;
    double b2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < p; ++k) {
                const double t = x(i, j) * x(i, k) - s(j, k);
                b2 += t * t;
            }
    b2 = std::min(d2, b2 / p / (double(n) * n));
    auto r = linear_shrinkage_detailed(x, false);
    EXPECT_NEAR(r.intensity, b2 / d2, 1e-12);
    EXPECT_NEAR(r.target_scale, mu, 1e-14);
}

TEST(LinearShrinkage, ConvexCombinationAndScaling) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto x = testutil::gaussian_data(6 + seed, 8, seed);
        for (bool center : {false, true}) {
            auto s = sample_covariance(x, center);
            auto r = linear_shrinkage_detailed(x, center);
            EXPECT_GE(r.intensity, 0.0);
            EXPECT_LE(r.intensity, 1.0);
            for (std::size_t j = 0; j < 8; ++j)
                for (std::size_t k = 0; k <= j; ++k) {
                    const double t = j == k ? r.target_scale : 0.0;
                    EXPECT_GE(r.estimate(j, k), std::min(s(j, k), t) - 1e-12);
                    EXPECT_LE(r.estimate(j, k), std::max(s(j, k), t) + 1e-12);
                }

            // Scaling X by c scales the estimate by c^2.
            Matrix scaled = x.values();
            for (std::size_t i = 0; i < scaled.rows(); ++i)
                for (std::size_t j = 0; j < 8; ++j) scaled(i, j) *= 2.0;
            auto r2 = linear_shrinkage(DataMatrix(scaled), center);
            for (std::size_t j = 0; j < 8; ++j)
                for (std::size_t k = 0; k <= j; ++k) EXPECT_NEAR(r2(j, k), 4.0 * r.estimate(j, k), 1e-12);
            auto s2 = sample_estimator(DataMatrix(scaled), center);
            for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(s2(j, j), 4.0 * s(j, j));
        }
    }
}

TEST(LinearShrinkage, RequiresTwoSamples) {
    DataMatrix x(1, 3, {1, 2, 3});
    EXPECT_THROW(linear_shrinkage(x, false), InvalidInput);
}
