#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbmou/cholesky.hpp"
#include "fbmou/errors.hpp"
#include "fbmou/gauss_legendre.hpp"
#include "fbmou/parallel.hpp"
#include "fbmou/quadrature.hpp"
#include "fbmou/rng.hpp"
#include "fbmou/special.hpp"

namespace fbmou {

// Paths are processed in fixed blocks of this size; see parallel.hpp.
inline constexpr int kPathBlock = 4096;

/// One-step Gaussian model of the joint OU / Brownian increments.
/// Index layout of the covariance: 0..nm-1 are the OU stochastic
/// integrals eps_j = int e^(-(dt-s)x_j) dW_s, index nm is dW. The factor
/// is rank-truncated with the dW row pivoted first, so dW = sqrt(dt) z_0
/// for every truncation rank.
struct IncrementModel {
    double dt = 0.0;
    Eigen::VectorXd decay;      // d_j = exp(-dt x_j)
    Eigen::MatrixXd cov_factor; // (nm+1) x rank
    std::vector<int> pivots;
    int rank = 0;
};

inline IncrementModel increment_model(const QuadratureScheme& scheme, double dt,
                                      double tol_rank = 1e-12) {
    if (!(dt > 0.0))
        throw std::invalid_argument("increment_model requires dt > 0");
    const int nm = int(scheme.nodes.size());
    Eigen::MatrixXd cov(nm + 1, nm + 1);
    for (int j = 0; j < nm; ++j) {
        for (int l = j; l < nm; ++l) {
            const double z = scheme.nodes[j] + scheme.nodes[l];
            cov(j, l) = cov(l, j) = -std::expm1(-dt * z) / z;
        }
        cov(j, nm) = cov(nm, j) = -std::expm1(-dt * scheme.nodes[j]) / scheme.nodes[j];
    }
    cov(nm, nm) = dt;

    PivotedCholesky chol = pivoted_cholesky(cov, tol_rank, /*first_pivot=*/nm);

    IncrementModel model;
    model.dt = dt;
    model.decay.resize(nm);
    for (int j = 0; j < nm; ++j)
        model.decay(j) = std::exp(-dt * scheme.nodes[j]);
    model.cov_factor = std::move(chol.factor);
    model.pivots = std::move(chol.pivots);
    model.rank = chol.rank;
    return model;
}

/// Simulated trajectories of W^{H,n} on a uniform grid, with the
/// correlated driver increments dB for the price process. Rows are
/// paths: whn is N x (k+1), db is N x k, so each time step writes one
/// contiguous column.
struct LiftPathBatch {
    std::vector<double> times;
    Eigen::MatrixXd whn;
    Eigen::MatrixXd db;
    std::uint64_t seed = 0;
    std::string scheme_id;
};

struct LiftRunResult {
    LiftPathBatch batch;
    Eigen::MatrixXd y_final;  // nm x N OU state at the last grid time
};

namespace detail {

// Per-(path, step) draw layout: idx 0 drives dW (factor column 0),
// idx 1 is the orthogonal driver component dWperp, and factor columns
// q >= 1 consume Box-Muller pairs starting at pair index 2. Each column
// is a fixed function of (stream, step, q) alone, so draws agree across
// schemes of any factor rank and any thread count.
inline void fill_step_draws(const CounterRng::Stream& draws, int rank, int p, Eigen::MatrixXd& z,
                            double& zperp) {
    z(0, p) = draws.normal(0);
    zperp = draws.normal(1);
    for (int q = 1; q < rank; q += 2) {
        double z1, z2;
        draws.normal_pair(std::uint64_t(2 + (q - 1) / 2), z1, z2);
        z(q, p) = z1;
        if (q + 1 < rank)
            z(q + 1, p) = z2;
    }
}

}  // namespace detail

inline LiftRunResult simulate_lift_range(const QuadratureScheme& scheme,
                                         const IncrementModel& model,
                                         const Eigen::MatrixXd& y0, int first_step, int steps,
                                         double rho, int paths, std::uint64_t seed,
                                         int threads = 1) {
    if (steps < 1 || paths < 1)
        throw std::invalid_argument("simulate_lift requires k >= 1 and N >= 1");
    if (!(rho >= -1.0 && rho <= 1.0))
        throw std::invalid_argument("correlation rho must lie in [-1, 1]");
    const int nm = int(scheme.nodes.size());
    if (y0.rows() != nm || y0.cols() != paths)
        throw std::invalid_argument("initial state must be (n*m) x N");

    const CounterRng rng(seed);
    const double dt = model.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double rho_perp = std::sqrt(1.0 - rho * rho);
    const Eigen::Map<const Eigen::VectorXd> kw(scheme.kernel_weights.data(), nm);
    const Eigen::MatrixXd factor_ou = model.cov_factor.topRows(nm);

    LiftRunResult out;
    out.batch.times.resize(steps + 1);
    for (int s = 0; s <= steps; ++s)
        out.batch.times[s] = dt * double(first_step + s);
    out.batch.whn.resize(paths, steps + 1);
    out.batch.db.resize(paths, steps);
    out.batch.seed = seed;
    out.batch.scheme_id = scheme.id();
    out.y_final.resize(nm, paths);

    parallel_blocks(paths, kPathBlock, threads, [&](int p0, int p1) {
        const int width = p1 - p0;
        Eigen::MatrixXd y = y0.middleCols(p0, width);
        Eigen::MatrixXd z(model.rank, width);
        Eigen::RowVectorXd zperp(width);

        out.batch.whn.col(0).segment(p0, width) = (kw.transpose() * y).transpose();
        for (int s = 0; s < steps; ++s) {
            const std::uint64_t step = std::uint64_t(first_step + s);
            for (int p = 0; p < width; ++p)
                detail::fill_step_draws(rng.at(std::uint64_t(p0 + p), step), model.rank, p, z,
                                        zperp(p));
            y.array().colwise() *= model.decay.array();
            y.noalias() += factor_ou * z;
            out.batch.whn.col(s + 1).segment(p0, width) = (kw.transpose() * y).transpose();
            out.batch.db.col(s).segment(p0, width) =
                ((rho * sqrt_dt) * z.row(0) + (rho_perp * sqrt_dt) * zperp).transpose();
        }
        out.y_final.middleCols(p0, width) = y;
    });
    return out;
}

inline LiftPathBatch simulate_lift(const QuadratureScheme& scheme, double T, int k, double rho,
                                   int paths, std::uint64_t seed, int threads = 1,
                                   double tol_rank = 1e-12) {
    if (!(T > 0.0))
        throw std::invalid_argument("simulate_lift requires T > 0");
    if (k < 1)
        throw std::invalid_argument("simulate_lift requires k >= 1");
    const IncrementModel model = increment_model(scheme, T / k, tol_rank);
    const Eigen::MatrixXd y0 = Eigen::MatrixXd::Zero(int(scheme.nodes.size()), paths);
    return simulate_lift_range(scheme, model, y0, 0, k, rho, paths, seed, threads).batch;
}

/// Closed-form Var(W^{H,n}_T) = sum_{j,l} w_j w_l (1-exp(-(x_j+x_l)T))/(x_j+x_l).
inline double lift_terminal_variance(const QuadratureScheme& scheme, double T) {
    const size_t nm = scheme.nodes.size();
    double sum = 0.0;
    for (size_t j = 0; j < nm; ++j)
        for (size_t l = 0; l < nm; ++l) {
            const double z = scheme.nodes[j] + scheme.nodes[l];
            sum += scheme.kernel_weights[j] * scheme.kernel_weights[l] * (-std::expm1(-z * T)) / z;
        }
    return sum;
}

namespace detail {

// R(s,t) = int_0^s ((t-u)(s-u))^(H-1/2) du for s <= t. The substitution
// s - u = s w^(1/alpha) absorbs the endpoint singularity, leaving a
// bounded integrand handled by 64-point Gauss-Legendre.
inline double rl_fbm_cov(double H, double s, double t) {
    if (s > t)
        std::swap(s, t);
    const double alpha = H + 0.5;
    if (s == t)
        return std::pow(t, 2.0 * H) / (2.0 * H);
    static thread_local GaussLegendre gl = gauss_legendre(64);
    double sum = 0.0;
    for (int q = 0; q < 64; ++q) {
        const double w = 0.5 * (gl.x[q] + 1.0);
        const double u = s * (1.0 - std::pow(w, 1.0 / alpha));
        sum += 0.5 * gl.w[q] * std::pow(t - u, alpha - 1.0);
    }
    return sum * std::pow(s, alpha) / alpha;
}

inline Eigen::MatrixXd lower_factor_with_jitter(Eigen::MatrixXd cov, const char* what) {
    const double jitter = 1e-14 * cov.diagonal().maxCoeff();
    for (int attempt = 0; attempt <= 3; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() == Eigen::Success)
            return llt.matrixL();
        if (attempt == 3)
            break;
        cov.diagonal().array() += jitter;
    }
    throw numerical_failure(std::string(what) + ": covariance factorization failed after jitter");
}

}  // namespace detail

/// Exact Gaussian samples of Volterra fBm W^H at the given times via a
/// dense Cholesky factor of the covariance (the O(k^3) reference method).
/// Columns are paths.
inline Eigen::MatrixXd exact_rl_fbm(double H, const std::vector<double>& times, int paths,
                                    std::uint64_t seed, int threads = 1) {
    if (!(H > 0.0 && H < 0.5))
        throw std::invalid_argument("Hurst index must lie in (0, 1/2)");
    const int k = int(times.size());
    if (k < 1 || k > 2048)
        throw std::invalid_argument("exact_rl_fbm requires 1 <= #times <= 2048");
    for (int i = 0; i < k; ++i)
        if (!(times[i] > 0.0) || (i > 0 && times[i] <= times[i - 1]))
            throw std::invalid_argument("times must be strictly increasing and positive");

    Eigen::MatrixXd cov(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j)
            cov(i, j) = cov(j, i) = detail::rl_fbm_cov(H, times[i], times[j]);
    const Eigen::MatrixXd factor = detail::lower_factor_with_jitter(std::move(cov), "exact_rl_fbm");

    const CounterRng rng(seed);
    Eigen::MatrixXd samples(k, paths);
    parallel_blocks(paths, kPathBlock, threads, [&](int p0, int p1) {
        const int width = p1 - p0;
        Eigen::MatrixXd z(k, width);
        for (int p = 0; p < width; ++p)
            for (int i = 0; i < k; ++i)
                z(i, p) = rng.normal(std::uint64_t(p0 + p), 0, std::uint64_t(i));
        samples.middleCols(p0, width).noalias() = factor * z;
    });
    return samples;
}

struct MonteCarloEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

/// Monte Carlo estimate of E[(W^H_T - W^{H,n}_T)^2] from the exact joint
/// Gaussian of (W^H_T, OU_1, ..., OU_nm); validates the closed-form L2
/// error by an independent route.
inline MonteCarloEstimate joint_terminal_error_mc(const QuadratureScheme& scheme, double T,
                                                  int paths, std::uint64_t seed,
                                                  int threads = 1) {
    if (paths < 2)
        throw std::invalid_argument("joint_terminal_error_mc requires N >= 2");
    const int nm = int(scheme.nodes.size());
    const double H = scheme.params.H;
    const double alpha = scheme.params.alpha;

    Eigen::MatrixXd cov(nm + 1, nm + 1);
    cov(0, 0) = std::pow(T, 2.0 * H) / (2.0 * H);
    for (int j = 0; j < nm; ++j) {
        const double x = scheme.nodes[j];
        cov(0, j + 1) = cov(j + 1, 0) =
            std::pow(x, -alpha) * lower_incomplete_gamma(alpha, x * T);
        for (int l = j; l < nm; ++l) {
            const double z = x + scheme.nodes[l];
            cov(j + 1, l + 1) = cov(l + 1, j + 1) = -std::expm1(-z * T) / z;
        }
    }
    PivotedCholesky chol = pivoted_cholesky(cov, 1e-12);

    // Row 0 of the factor maps z to W^H_T; rows 1.. map to the OU values.
    Eigen::RowVectorXd diff_map = chol.factor.row(0);
    for (int j = 0; j < nm; ++j)
        diff_map -= scheme.kernel_weights[j] * chol.factor.row(j + 1);

    const CounterRng rng(seed);
    const int nblocks = (paths + kPathBlock - 1) / kPathBlock;
    std::vector<double> block_sum(nblocks, 0.0), block_sum2(nblocks, 0.0);
    parallel_blocks(paths, kPathBlock, threads, [&](int p0, int p1) {
        Eigen::VectorXd z(chol.rank);
        double s1 = 0.0, s2 = 0.0;
        for (int p = p0; p < p1; ++p) {
            for (int q = 0; q < chol.rank; ++q)
                z(q) = rng.normal(std::uint64_t(p), 0, std::uint64_t(q));
            const double d = diff_map.dot(z);
            const double d2 = d * d;
            s1 += d2;
            s2 += d2 * d2;
        }
        block_sum[p0 / kPathBlock] = s1;
        block_sum2[p0 / kPathBlock] = s2;
    });
    double sum = 0.0, sum2 = 0.0;
    for (int b = 0; b < nblocks; ++b) {
        sum += block_sum[b];
        sum2 += block_sum2[b];
    }
    const double mean = sum / paths;
    const double var = std::max(0.0, sum2 / paths - mean * mean) * paths / (paths - 1.0);
    return MonteCarloEstimate{mean, std::sqrt(var / paths)};
}

/// Pathwise random-field representation: Y_t(x) =
/// (W_t - int_0^t W_s x e^(-(t-s)x) ds) / Gamma(1/2 - H), the time
/// integral by the trapezoid rule (first-order consistency check, not a
/// production sampler).
inline std::vector<double> lift_from_path(const std::vector<double>& w, double dt, double x,
                                          double H) {
    if (x < 0.0)
        throw std::invalid_argument("lift_from_path requires x >= 0");
    if (!(dt > 0.0))
        throw std::invalid_argument("lift_from_path requires dt > 0");
    const double g = gamma_fn(0.5 - H);
    const double decay = std::exp(-x * dt);
    const double half = 0.5 * dt * x;
    std::vector<double> y(w.size());
    double integral = 0.0;
    y[0] = w[0] / g;
    for (size_t j = 0; j + 1 < w.size(); ++j) {
        integral = decay * (integral + half * w[j]) + half * w[j + 1];
        y[j + 1] = (w[j + 1] - integral) / g;
    }
    return y;
}

}  // namespace fbmou
