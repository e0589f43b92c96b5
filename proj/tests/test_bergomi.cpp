#include <gtest/gtest.h>

#include <cmath>

#include "fbmou/bergomi.hpp"

using namespace fbmou;

namespace {

PricingConfig small_config() {
    PricingConfig config;
    config.K = 1.0;
    config.T = 1.0;
    config.k = 64;
    config.N = 20000;
    config.rho = 0.0;
    config.H = 0.1;
    config.n = 4;
    config.m = 2;
    config.seed = 123;
    return config;
}

// Unit-volatility Black-Scholes at-the-money put, Phi(1/2) - Phi(-1/2).
constexpr double kBsPut = 0.38292492254802621;

}  // namespace

TEST(SimulateTerminalPrices, MartingaleMeanNearOne) {
    PricingConfig config = small_config();
    const TerminalSamples samples = simulate_terminal_prices(config);
    EXPECT_TRUE((samples.s_terminal.array() > 0.0).all());
    EXPECT_EQ(samples.clamped, 0);
    const double mean = samples.s_terminal.mean();
    const double sd = std::sqrt((samples.s_terminal.array() - mean).square().sum() /
                                (config.N - 1));
    EXPECT_NEAR(mean, 1.0, 4.0 * sd / std::sqrt(double(config.N)));
}

TEST(SimulateTerminalPrices, DeterministicAndThreadInvariant) {
    PricingConfig config = small_config();
    config.N = 10000;
    const TerminalSamples a = simulate_terminal_prices(config);
    config.threads = 4;
    const TerminalSamples b = simulate_terminal_prices(config);
    EXPECT_EQ(a.s_terminal, b.s_terminal);
    EXPECT_EQ(a.clamped, b.clamped);
}

TEST(SimulateTerminalPrices, ValidatesConfig) {
    PricingConfig config = small_config();
    config.rho = 1.5;
    EXPECT_THROW(simulate_terminal_prices(config), std::invalid_argument);
    config = small_config();
    config.N = 1;
    EXPECT_THROW(simulate_terminal_prices(config), std::invalid_argument);
    config = small_config();
    config.K = -1.0;
    EXPECT_THROW(simulate_terminal_prices(config), std::invalid_argument);
}

TEST(PutPrice, TrivialPayoffs) {
    PricingConfig config = small_config();
    TerminalSamples samples;
    samples.s_terminal = Eigen::VectorXd::Ones(4);

    config.K = 0.0;
    PricingResult zero = put_price(samples, config);
    EXPECT_DOUBLE_EQ(zero.price, 0.0);
    EXPECT_DOUBLE_EQ(zero.stderr_, 0.0);

    config.K = 2.0;
    PricingResult one = put_price(samples, config);
    EXPECT_DOUBLE_EQ(one.price, 1.0);
    EXPECT_DOUBLE_EQ(one.stderr_, 0.0);

    samples.s_terminal.resize(1);
    EXPECT_THROW(put_price(samples, config), std::invalid_argument);
}

TEST(PutPrice, MonotoneInStrike) {
    PricingConfig config = small_config();
    const TerminalSamples samples = simulate_terminal_prices(config);
    double prev = -1.0;
    for (double strike : {0.5, 0.8, 1.0, 1.3, 2.0}) {
        config.K = strike;
        const double price = put_price(samples, config).price;
        EXPECT_GE(price, prev);
        EXPECT_LE(price, strike);
        prev = price;
    }
}

TEST(PutPrice, BlackScholesDegenerateCase) {
    // V == 0 makes S a unit-volatility GBM; the log-Euler scheme is exact
    // there, so the put estimate must match Black-Scholes up to MC noise.
    PricingConfig config = small_config();
    config.k = 128;
    config.N = 50000;
    QuadratureScheme zero_vol = build_scheme(ModelParams::make(config.H), 2, 1);
    for (auto& w : zero_vol.kernel_weights)
        w = 0.0;
    const PricingResult put = put_price(simulate_terminal_prices(config, &zero_vol), config);
    EXPECT_NEAR(put.price, kBsPut, 3.0 * put.stderr_ + 0.002);
}

TEST(CallViaParity, ParityArithmetic) {
    PricingConfig config = small_config();
    PricingResult put;
    put.config = config;
    put.price = 0.382925;
    put.stderr_ = 0.001;

    put.config.K = 1.0;
    PricingResult call = call_via_parity(put);
    EXPECT_DOUBLE_EQ(call.price, put.price);
    EXPECT_DOUBLE_EQ(call.stderr_, put.stderr_);

    put.config.K = 2.0;
    put.price = 1.0;
    EXPECT_DOUBLE_EQ(call_via_parity(put).price, 0.0);

    put.config.K = 0.5;
    put.price = 0.1;
    EXPECT_NEAR(call_via_parity(put).price, 0.6, 1e-15);
}

TEST(Pricing, ConvergenceTowardFinerSchemes) {
    // Common random numbers; the gap to the finest scheme shrinks with n.
    PricingConfig config = small_config();
    config.k = 64;
    config.N = 20000;
    config.m = 5;
    config.n = 16;
    const double ref = price_put(config).price;
    config.n = 2;
    const double gap_coarse = std::fabs(price_put(config).price - ref);
    config.n = 8;
    const double gap_fine = std::fabs(price_put(config).price - ref);
    EXPECT_LE(gap_fine, gap_coarse);
}
