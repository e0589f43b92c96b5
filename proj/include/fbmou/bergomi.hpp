#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "fbmou/cholesky.hpp"
#include "fbmou/errors.hpp"
#include "fbmou/parallel.hpp"
#include "fbmou/quadrature.hpp"
#include "fbmou/rng.hpp"
#include "fbmou/simulate.hpp"

namespace fbmou {

/// Price process S_t = 1 + int_0^t S_s exp(V_s) dB_s with V the
/// (approximate or exact) Volterra Brownian motion, discretized in log
/// space with left-endpoint volatility.
struct PricingConfig {
    double K = 1.0;
    double T = 1.0;
    int k = 256;
    int N = 100000;
    double rho = 0.0;      // corr(B, W); rho <= 0 is parity-safe
    bool exact_oracle = false;
    double H = 0.1;
    int n = 16;
    int m = 5;
    double r = -1.0;       // <= 0 picks the default 2Hm/3
    std::uint64_t seed = 0;
    int threads = 1;
    double tol_rank = 1e-12;

    void validate() const {
        if (!(K >= 0.0)) throw std::invalid_argument("strike K must be >= 0");
        if (!(T > 0.0)) throw std::invalid_argument("horizon T must be > 0");
        if (k < 1) throw std::invalid_argument("steps k must be >= 1");
        if (N < 2) throw std::invalid_argument("paths N must be >= 2");
        if (!(rho >= -1.0 && rho <= 1.0))
            throw std::invalid_argument("correlation rho must lie in [-1, 1]");
        if (exact_oracle && k > 1024)
            throw std::invalid_argument("exact oracle pricing requires k <= 1024");
    }
};

struct TerminalSamples {
    Eigen::VectorXd s_terminal;
    long clamped = 0;  // evaluations where |V| hit the +-40 guard
};

struct PricingResult {
    double price = 0.0;
    double stderr_ = 0.0;
    long clamped = 0;
    PricingConfig config;
};

// Volatility guard: exp(2V) dt must stay representable.
inline constexpr double kVolClamp = 40.0;

namespace detail {

// Joint covariance of (W^H_{t_1..t_k}, dW_0..dW_{k-1}) on a uniform grid.
inline Eigen::MatrixXd exact_vol_joint_cov(double H, double dt, int k) {
    const double alpha = H + 0.5;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j)
            cov(i, j) = cov(j, i) = rl_fbm_cov(H, dt * (i + 1), dt * (j + 1));
    for (int i = 0; i < k; ++i) {
        const double ti = dt * (i + 1);
        for (int j = 0; j < k; ++j) {
            // Cov(W^H_{t_i}, dW_j) = ((t_i - t_j)^a - (t_i - min(t_{j+1}, t_i))^a)/a
            const double tj = dt * j, tj1 = dt * (j + 1);
            if (tj >= ti)
                continue;
            const double hi = std::pow(ti - tj, alpha);
            const double lo = (tj1 >= ti) ? 0.0 : std::pow(ti - tj1, alpha);
            cov(i, k + j) = cov(k + j, i) = (hi - lo) / alpha;
        }
        cov(k + i, k + i) = dt;
    }
    return cov;
}

}  // namespace detail

/// Samples of S_T. Log-Euler: log S_{t+dt} = log S_t - e^(2V_t) dt / 2
/// + e^(V_t) dB, exact for frozen volatility, so with V identically 0 it
/// reproduces geometric Brownian motion without bias. When `vol_scheme`
/// is given it overrides the (H, n, m, r) fields of the config.
inline TerminalSamples simulate_terminal_prices(const PricingConfig& config,
                                                const QuadratureScheme* vol_scheme = nullptr) {
    config.validate();
    const double dt = config.T / config.k;
    const double sqrt_dt = std::sqrt(dt);
    const double rho_perp = std::sqrt(1.0 - config.rho * config.rho);
    const CounterRng rng(config.seed);
    const int nblocks = (config.N + kPathBlock - 1) / kPathBlock;
    std::vector<long> block_clamped(nblocks, 0);

    TerminalSamples out;
    out.s_terminal.resize(config.N);

    auto price_step = [&](Eigen::RowVectorXd& log_s, const Eigen::RowVectorXd& v_left,
                          const Eigen::RowVectorXd& db, long& clamped) {
        for (int p = 0; p < log_s.size(); ++p) {
            double v = v_left(p);
            if (v > kVolClamp) { v = kVolClamp; ++clamped; }
            if (v < -kVolClamp) { v = -kVolClamp; ++clamped; }
            const double vol = std::exp(v);
            log_s(p) += -0.5 * vol * vol * dt + vol * db(p);
        }
    };

    if (config.exact_oracle) {
        const Eigen::MatrixXd factor = detail::lower_factor_with_jitter(
            detail::exact_vol_joint_cov(config.H, dt, config.k), "exact oracle pricing");
        const int dim = 2 * config.k;
        // Whole-path joint draws live on step counter 2^32 so they cannot
        // collide with the per-step dWperp draws.
        const std::uint64_t joint_step = std::uint64_t(1) << 32;

        parallel_blocks(config.N, kPathBlock, config.threads, [&](int p0, int p1) {
            const int width = p1 - p0;
            Eigen::MatrixXd z(dim, width);
            for (int p = 0; p < width; ++p)
                for (int i = 0; i < dim; ++i)
                    z(i, p) = rng.normal(std::uint64_t(p0 + p), joint_step, std::uint64_t(i));
            const Eigen::MatrixXd g = factor * z;  // rows 0..k-1: W^H, rows k..: dW

            Eigen::RowVectorXd log_s = Eigen::RowVectorXd::Zero(width);
            Eigen::RowVectorXd v_left(width), db(width);
            long clamped = 0;
            for (int s = 0; s < config.k; ++s) {
                if (s == 0)
                    v_left.setZero();
                else
                    v_left = g.row(s - 1);
                for (int p = 0; p < width; ++p) {
                    const double dwperp = rng.normal(std::uint64_t(p0 + p), std::uint64_t(s), 1);
                    db(p) = config.rho * g(config.k + s, p) + rho_perp * sqrt_dt * dwperp;
                }
                price_step(log_s, v_left, db, clamped);
            }
            out.s_terminal.segment(p0, width) = log_s.array().exp();
            block_clamped[p0 / kPathBlock] = clamped;
        });
    } else {
        const QuadratureScheme scheme =
            vol_scheme ? *vol_scheme
                       : build_scheme(ModelParams::make(config.H, config.T), config.n,
                                      config.m, config.r);
        const IncrementModel model = increment_model(scheme, dt, config.tol_rank);
        const int nm = int(scheme.nodes.size());
        const Eigen::Map<const Eigen::VectorXd> kw(scheme.kernel_weights.data(), nm);
        const Eigen::MatrixXd factor_ou = model.cov_factor.topRows(nm);

        parallel_blocks(config.N, kPathBlock, config.threads, [&](int p0, int p1) {
            const int width = p1 - p0;
            Eigen::MatrixXd y = Eigen::MatrixXd::Zero(nm, width);
            Eigen::MatrixXd z(model.rank, width);
            Eigen::RowVectorXd log_s = Eigen::RowVectorXd::Zero(width);
            Eigen::RowVectorXd v_left = Eigen::RowVectorXd::Zero(width);
            Eigen::RowVectorXd db(width);
            long clamped = 0;
            for (int s = 0; s < config.k; ++s) {
                for (int p = 0; p < width; ++p) {
                    double zperp;
                    fbmou::detail::fill_step_draws(
                        rng.at(std::uint64_t(p0 + p), std::uint64_t(s)), model.rank, p, z, zperp);
                    db(p) = config.rho * sqrt_dt * z(0, p) + rho_perp * sqrt_dt * zperp;
                }
                price_step(log_s, v_left, db, clamped);
                y.array().colwise() *= model.decay.array();
                y.noalias() += factor_ou * z;
                v_left = kw.transpose() * y;
            }
            out.s_terminal.segment(p0, width) = log_s.array().exp();
            block_clamped[p0 / kPathBlock] = clamped;
        });
    }

    for (long c : block_clamped)
        out.clamped += c;
    if (!out.s_terminal.allFinite())
        throw numerical_failure("simulate_terminal_prices: non-finite terminal price");
    return out;
}

/// price = mean (K - S_T)+, stderr = sample sd / sqrt(N).
inline PricingResult put_price(const TerminalSamples& samples, const PricingConfig& config) {
    const long n = samples.s_terminal.size();
    if (n < 2)
        throw std::invalid_argument("put_price requires at least 2 samples");
    double sum = 0.0, sum2 = 0.0;
    for (long p = 0; p < n; ++p) {
        const double payoff = std::max(config.K - samples.s_terminal(p), 0.0);
        sum += payoff;
        sum2 += payoff * payoff;
    }
    const double mean = sum / double(n);
    const double var = std::max(0.0, sum2 / double(n) - mean * mean) * double(n) / double(n - 1);
    PricingResult result;
    result.price = mean;
    result.stderr_ = std::sqrt(var / double(n));
    result.clamped = samples.clamped;
    result.config = config;
    return result;
}

inline PricingResult price_put(const PricingConfig& config) {
    return put_price(simulate_terminal_prices(config), config);
}

/// call = put + S_0 - K with S_0 = 1 and zero rates. Parity requires S to
/// be a martingale, which is only guaranteed for rho <= 0.
inline PricingResult call_via_parity(const PricingResult& put) {
    if (put.config.rho > 0.0)
        std::cerr << "call_via_parity: rho > 0, martingale property (and hence parity) "
                     "is not guaranteed\n";
    PricingResult call = put;
    call.price = put.price + 1.0 - put.config.K;
    return call;
}

}  // namespace fbmou
