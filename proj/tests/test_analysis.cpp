#include <gtest/gtest.h>

#include <cmath>

#include "fbmou/analysis.hpp"
#include "oracles.hpp"

using namespace fbmou;

namespace {

// Numeric-integration oracle for the squared kernel difference
// int_0^T (s^(H-1/2) - K_n(s))^2 ds. The substitution s = u^(1/(2H))
// removes the s^(2H-1) singularity at zero.
double l2_error_sq_by_integration(const QuadratureScheme& scheme, double T) {
    const double H = scheme.params.H;
    const double p = 1.0 / (2.0 * H);
    auto g = [&](double u) {
        if (u == 0.0)
            return p;  // limit of the transformed integrand
        const double s = std::pow(u, p);
        const double diff = std::pow(s, H - 0.5) - kernel_eval(scheme, s);
        return diff * diff * p * std::pow(u, p - 1.0);
    };
    return oracles::adaptive_simpson(g, 0.0, std::pow(T, 1.0 / p), 1e-10, 60);
}

QuadratureScheme zero_weight_scheme(double H) {
    QuadratureScheme scheme = build_scheme(ModelParams::make(H), 4, 2);
    for (auto& w : scheme.kernel_weights)
        w = 0.0;
    for (auto& w : scheme.gauss_weights)
        w = 0.0;
    return scheme;
}

}  // namespace

TEST(L2Error, ZeroApproximationRecoversTrueVariance) {
    const ErrorRecord rec = l2_error(zero_weight_scheme(0.1), 1.0);
    EXPECT_NEAR(rec.abs_error * rec.abs_error, 5.0, 1e-12);
    EXPECT_NEAR(rec.rel_error, 1.0, 1e-13);
}

TEST(L2Error, MatchesIntegrationOracle) {
    struct Case { double H; int m; int n; };
    for (const auto& c : {Case{0.1, 5, 16}, Case{0.25, 3, 32}}) {
        const QuadratureScheme scheme = build_scheme(ModelParams::make(c.H), c.n, c.m);
        const ErrorRecord rec = l2_error(scheme, 1.0);
        const double oracle = l2_error_sq_by_integration(scheme, 1.0);
        EXPECT_NEAR(rec.abs_error * rec.abs_error, oracle, 1e-6 * oracle)
            << "H=" << c.H << " m=" << c.m << " n=" << c.n;
    }
}

TEST(L2Error, DecreasesWhenNDoubles) {
    const ModelParams params = ModelParams::make(0.1);
    const double e1 = l2_error(build_scheme(params, 16, 5), 1.0).rel_error;
    const double e2 = l2_error(build_scheme(params, 32, 5), 1.0).rel_error;
    EXPECT_LT(e2, e1);
}

TEST(L2Error, RejectsBadHorizon) {
    EXPECT_THROW(l2_error(build_scheme(ModelParams::make(0.1), 4, 2), 0.0),
                 std::invalid_argument);
}

TEST(ErrorSweep, StrictlyDecreasingRecords) {
    const auto records = error_sweep(0.1, 5, {4, 8});
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].n, 4);
    EXPECT_EQ(records[1].n, 8);
    EXPECT_LT(records[1].rel_error, records[0].rel_error);
}

TEST(ErrorSweep, EmptyInputEmptyOutput) {
    EXPECT_TRUE(error_sweep(0.1, 5, {}).empty());
}

TEST(FitRate, ExactPowerLaw) {
    std::vector<ErrorRecord> records;
    for (int n : {2, 4, 8}) {
        ErrorRecord rec{};
        rec.n = n;
        rec.rel_error = std::pow(double(n), -0.5);
        records.push_back(rec);
    }
    const RateFit fit = fit_rate(records);
    EXPECT_NEAR(fit.slope, 0.5, 1e-13);
    EXPECT_NEAR(fit.residual, 0.0, 1e-13);
}

TEST(FitRate, TwoPointSlopeIsLogRatio) {
    std::vector<ErrorRecord> records(2);
    records[0].n = 4;
    records[0].rel_error = 0.3;
    records[1].n = 16;
    records[1].rel_error = 0.06;
    const RateFit fit = fit_rate(records);
    EXPECT_NEAR(fit.slope, -std::log(0.06 / 0.3) / std::log(4.0), 1e-13);
}

TEST(FitRate, AffineInvariance) {
    auto records = error_sweep(0.25, 3, {4, 8, 16, 32});
    const double slope = fit_rate(records).slope;
    for (auto& rec : records)
        rec.rel_error *= 7.25;
    EXPECT_NEAR(fit_rate(records).slope, slope, 1e-12);
}

TEST(FitRate, RejectsDegenerateInput) {
    std::vector<ErrorRecord> one(1);
    one[0].n = 4;
    one[0].rel_error = 0.5;
    EXPECT_THROW(fit_rate(one), std::invalid_argument);
    std::vector<ErrorRecord> bad(2);
    bad[0].n = 4;
    bad[0].rel_error = 0.5;
    bad[1].n = 8;
    bad[1].rel_error = 0.0;
    EXPECT_THROW(fit_rate(bad), std::invalid_argument);
}

TEST(FitRate, ObservedSlopeNearPrediction) {
    // Short sweep; the full Fig.-3 range runs in the acceptance suite.
    const auto records = error_sweep(0.25, 3, {8, 16, 32, 64, 128});
    const double predicted = predicted_rate(0.25, 3);
    EXPECT_NEAR(fit_rate(records).slope, predicted, 0.2 * predicted);
}
