#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nowcast/chaos/cao.hpp"
#include "nowcast/chaos/embedding.hpp"
#include "nowcast/chaos/lyapunov.hpp"
#include "nowcast/chaos/pacf.hpp"
#include "nowcast/core/error.hpp"
#include "nowcast/synth/generators.hpp"
#include "oracles/cao_oracle.hpp"
#include "oracles/lyapunov_oracle.hpp"
#include "oracles/pacf_oracle.hpp"

using namespace nowcast;
using namespace nowcast::chaos;

namespace {

std::vector<double> iota_series(std::size_t n) {
    std::vector<double> v(n);
    std::iota(v.begin(), v.end(), 1.0);
    return v;
}

}  // namespace

TEST(Pacf, TrendSeriesMatchesHandComputation) {
    const auto x = iota_series(8);
    const auto p = pacf(x, 2);
    // mean 4.5, sum of squares 42; lag-1 cross products 26.25, lag-2 11.5
    const double r1 = 26.25 / 42.0;
    const double r2 = 11.5 / 42.0;
    EXPECT_DOUBLE_EQ(p[0], r1);
    EXPECT_NEAR(p[1], (r2 - r1 * r1) / (1.0 - r1 * r1), 1e-15);
}

TEST(Pacf, FirstValueEqualsAcfBitForBit) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto x = synth::ar1(200, 0.5, seed);
        EXPECT_EQ(pacf(x, 10)[0], acf(x, 10)[1]);
    }
}

TEST(Pacf, MatchesYuleWalkerOracle) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto x = synth::ar1(500, 0.6, seed);
        const auto got = pacf(x, 12);
        const auto want = oracle::pacf_yule_walker(x, 12);
        for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-10) << "lag " << k + 1;
    }
}

TEST(Pacf, Ar1RecoversCoefficient) {
    const std::size_t n = 5000;
    const double band = 2.0 / std::sqrt(static_cast<double>(n));
    std::size_t small = 0;
    std::size_t total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto p = pacf(synth::ar1(n, 0.8, seed), 20);
        EXPECT_NEAR(p[0], 0.8, 0.05);
        for (std::size_t k = 1; k < p.size(); ++k, ++total)
            if (std::abs(p[k]) < band) ++small;
    }
    EXPECT_GE(static_cast<double>(small), 0.9 * static_cast<double>(total));
}

TEST(Pacf, ValuesWithinUnitInterval) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = synth::white_noise(100 + 10 * trial, rng());
        for (double v : pacf(x, 30)) {
            EXPECT_LE(v, 1.0 + 1e-9);
            EXPECT_GE(v, -1.0 - 1e-9);
        }
    }
}

TEST(Pacf, Errors) {
    EXPECT_THROW(pacf(std::vector<double>(50, 3.0), 5), DegeneracyError);
    EXPECT_THROW(pacf(iota_series(10), 5), LengthError);
    EXPECT_NO_THROW(pacf(iota_series(11), 5));
}

TEST(SelectLag, Rules) {
    EXPECT_EQ(select_lag(std::vector<double>{0.9, 0.5, 0.01, 0.02}, 400), 2u);
    EXPECT_EQ(select_lag(std::vector<double>{0.01, 0.02, 0.03}, 400), 1u);
    EXPECT_EQ(select_lag(std::vector<double>{0.9}, 100), 1u);
    EXPECT_EQ(select_lag(std::vector<double>{0.9, 0.8, 0.7}, 400), 3u);
    EXPECT_EQ(select_lag(std::vector<double>{0.9, 0.01, 0.7}, 400), 1u);
}

TEST(Lyapunov, LogisticMapNearLn2) {
    const auto x = synth::logistic_map(2000, 0.2);
    const double lambda = estimate_lyapunov(x, 1, 2);
    const double analytic = oracle::logistic_lyapunov(x);
    EXPECT_NEAR(analytic, std::log(2.0), 0.05);
    EXPECT_NEAR(lambda, std::log(2.0), 0.1);
    EXPECT_NEAR(lambda, analytic, 0.1);
}

TEST(Lyapunov, SineIsNotChaotic) {
    const auto x = synth::sine_wave(2000, 0.1);
    EXPECT_LE(estimate_lyapunov(x, 1, 2), 0.0);
}

TEST(Lyapunov, Errors) {
    EXPECT_THROW(estimate_lyapunov(std::vector<double>(500, 5.0), 1, 2), DegeneracyError);
    // (m-1) tau + max_steps + 2 = 1 + 10 + 2
    EXPECT_THROW(estimate_lyapunov(synth::logistic_map(12), 1, 2, 10), LengthError);
}

TEST(Lyapunov, Deterministic) {
    const auto x = synth::logistic_map(600, 0.3);
    EXPECT_EQ(estimate_lyapunov(x, 1, 3), estimate_lyapunov(x, 1, 3));
}

TEST(Lyapunov, DivergenceCurveShape) {
    const auto curve = divergence_curve(synth::logistic_map(1000, 0.3), 1, 2, 10);
    EXPECT_EQ(curve.mean_log_divergence.size(), 10u);
    EXPECT_EQ(curve.fit_steps, 5u);
    for (auto c : curve.pair_counts) EXPECT_GT(c, 0u);
}

TEST(Cao, MatchesOracleOnLogistic) {
    const auto x = synth::logistic_map(400, 0.37);
    const auto got = cao_profile(x, 1, 6);
    const auto want = oracle::cao(x, 1, 6);
    ASSERT_EQ(got.e1.size(), want.e1.size());
    for (std::size_t i = 0; i < want.e1.size(); ++i) {
        EXPECT_NEAR(got.e1[i], want.e1[i], 1e-12);
        EXPECT_NEAR(got.e2[i], want.e2[i], 1e-12);
    }
}

TEST(Cao, SineSaturatesAtLowDimension) {
    std::vector<double> x(1000);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::sin(2.0 * M_PI * static_cast<double>(k) / 100.0);
    const auto p = cao_profile(x, 25, 8);
    const auto want = oracle::cao(x, 25, 8);
    for (std::size_t i = 1; i < p.e1.size(); ++i) {
        EXPECT_GE(p.e1[i], 0.95) << "d = " << i + 1;
        EXPECT_NEAR(p.e1[i], want.e1[i], 1e-9);
    }
}

TEST(Cao, WhiteNoiseRisesSlowlyWithFlatE2) {
    const auto x = synth::white_noise(2000, 11);
    const auto p = cao_profile(x, 1, 8);
    EXPECT_LT(p.e1[0], 0.5);  // no early saturation
    EXPECT_FALSE(select_embedding_dim(p, 0.05).dim == 2);
    for (double e2 : p.e2) EXPECT_NEAR(e2, 1.0, 0.1);
}

TEST(Cao, EntriesFiniteNonNegativeEqualLength) {
    const auto p = cao_profile(synth::logistic_map(300, 0.61), 2, 5);
    ASSERT_EQ(p.e1.size(), p.e2.size());
    EXPECT_EQ(p.max_dim(), 5u);
    for (std::size_t i = 0; i < p.e1.size(); ++i) {
        EXPECT_TRUE(std::isfinite(p.e1[i]) && p.e1[i] >= 0.0);
        EXPECT_TRUE(std::isfinite(p.e2[i]) && p.e2[i] >= 0.0);
    }
}

TEST(Cao, LengthBoundary) {
    const auto x = synth::logistic_map(8 * 3 + 1, 0.4);
    EXPECT_THROW(cao_profile(x, 3, 8), LengthError);
    EXPECT_NO_THROW(cao_profile(synth::logistic_map(8 * 3 + 2, 0.4), 3, 8));
}

TEST(Cao, ConstantSeriesIsDegenerate) {
    EXPECT_THROW(cao_profile(std::vector<double>(100, 2.0), 1, 4), DegeneracyError);
}

TEST(Cao, DuplicatePointsAreSkipped) {
    // Period-4 orbit: every point has exact duplicates; neighbours must be distinct points.
    std::vector<double> x;
    for (int k = 0; k < 60; ++k) x.push_back(std::vector<double>{1, 3, 2, 5}[k % 4]);
    const auto p = cao_profile(x, 1, 3);
    for (double v : p.e1) EXPECT_TRUE(std::isfinite(v));
}

TEST(SelectEmbeddingDim, Rules) {
    EXPECT_EQ(select_embedding_dim({{0.4, 0.97, 0.99, 1.0}, {1, 1, 1, 1}}, 0.05).dim, 3u);
    const auto flat = select_embedding_dim({{1.0, 1.0, 1.0}, {1, 1, 1}}, 0.05);
    EXPECT_EQ(flat.dim, 2u);
    EXPECT_TRUE(flat.saturated);
    const auto rising = select_embedding_dim({{0.1, 0.3, 0.5, 0.7}, {1, 1, 1, 1}}, 0.05);
    EXPECT_EQ(rising.dim, 5u);
    EXPECT_FALSE(rising.saturated);
}

TEST(Takens, WorkedExample) {
    const auto m = takens_embed(iota_series(10), 2, 3);
    ASSERT_EQ(m.rows(), 6u);
    EXPECT_EQ(m.at(0, 0), 1.0);
    EXPECT_EQ(m.at(0, 1), 3.0);
    EXPECT_EQ(m.target(0), 5.0);
    EXPECT_EQ(m.at(5, 0), 6.0);
    EXPECT_EQ(m.at(5, 1), 8.0);
    EXPECT_EQ(m.target(5), 10.0);
}

TEST(Takens, RowCountsForWindowOf300) {
    const auto x = iota_series(300);
    const auto strided = takens_embed(x, 1, 5, 5);
    EXPECT_EQ(strided.rows(), 60u);
    EXPECT_EQ(strided.feature_count() + 1, 5u);
    EXPECT_EQ(takens_embed(x, 1, 5, 1).rows(), 296u);
}

TEST(Takens, RowCountLawRandomGrid) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 2 + rng() % 8;
        const std::size_t tau = 1 + rng() % 6;
        const std::size_t n = (m - 1) * tau + 1 + rng() % 200;
        const auto mat = takens_embed(iota_series(n), tau, m);
        ASSERT_EQ(mat.rows(), n - (m - 1) * tau);
        ASSERT_EQ(mat.feature_count(), m - 1);
    }
}

TEST(Takens, ForecastFeaturesAreTheBufferTail) {
    const auto x = iota_series(300);
    EXPECT_EQ(forecast_features(x, 1, 5), (std::vector<double>{297, 298, 299, 300}));
    EXPECT_EQ(forecast_features(x, 1, 2), (std::vector<double>{300}));
    EXPECT_EQ(forecast_features(x, 3, 4), (std::vector<double>{294, 297, 300}));
}

TEST(Takens, ForecastFeaturesEqualNextRowOfEmbedding) {
    // With tau = 1 the forecast input is the feature part of the row whose
    // target is the next, not yet observed, value.
    const auto x = synth::logistic_map(120, 0.3);
    for (std::size_t m = 2; m <= 7; ++m) {
        auto extended = x;
        extended.push_back(0.0);
        const auto mat = takens_embed(extended, 1, m);
        const auto last = mat.features(mat.rows() - 1);
        EXPECT_EQ(std::vector<double>(last.begin(), last.end()), forecast_features(x, 1, m));
    }
}

TEST(Takens, Errors) {
    EXPECT_THROW(takens_embed(iota_series(4), 2, 3), LengthError);
    EXPECT_NO_THROW(takens_embed(iota_series(5), 2, 3));
}
