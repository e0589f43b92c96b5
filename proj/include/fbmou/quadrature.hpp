#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbmou/errors.hpp"
#include "fbmou/gauss_legendre.hpp"
#include "fbmou/model.hpp"
#include "fbmou/special.hpp"

namespace fbmou {

/// Weighted moments m_k = int_a^b x^(k-alpha) dx, k = 0..count-1.
inline std::vector<double> weighted_moments(double a, double b, double alpha, int count) {
    if (!(a > 0.0))
        throw std::invalid_argument("weighted_moments requires a > 0");
    if (b < a)
        throw std::invalid_argument("weighted_moments requires b >= a");
    if (count < 1)
        throw std::invalid_argument("weighted_moments requires count >= 1");
    std::vector<double> m(count);
    for (int k = 0; k < count; ++k) {
        const double e = double(k) + 1.0 - alpha;
        m[k] = (std::pow(b, e) - std::pow(a, e)) / e;
    }
    return m;
}

namespace detail {

// Discretization of the measure u^(-alpha) du on [1, lambda]: composite
// Gauss-Legendre over geometric panels, resolving the weight's decay.
struct DiscreteMeasure {
    std::vector<double> u;
    std::vector<double> w;
};

inline DiscreteMeasure discretize_weight(double lambda, double alpha, int m) {
    const int per_panel = 12;
    int panels = std::max(20, 2 * m);
    if (lambda > 1.0)
        panels = std::max(panels, int(std::ceil(std::log(lambda) / std::log(2.0))));
    static thread_local GaussLegendre gl = gauss_legendre(12);

    DiscreteMeasure d;
    d.u.reserve(size_t(panels) * per_panel);
    d.w.reserve(size_t(panels) * per_panel);
    const double log_lambda = std::log(lambda);
    for (int p = 0; p < panels; ++p) {
        const double lo = std::exp(log_lambda * p / panels);
        const double hi = std::exp(log_lambda * (p + 1) / panels);
        const double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
        for (int q = 0; q < per_panel; ++q) {
            const double u = c + h * gl.x[q];
            d.u.push_back(u);
            d.w.push_back(h * gl.w[q] * std::pow(u, -alpha));
        }
    }
    return d;
}

}  // namespace detail

/// m-point Gauss rule with respect to the weight x^(-alpha) on [a, b]:
/// nodes in (a, b), positive weights c_j with sum_j c_j x_j^k = m_k for
/// k = 0..2m-1.
///
/// Construction: rescale to [1, b/a], run a discretized Stieltjes procedure
/// in the affine variable t in [-1, 1] to get the three-term recurrence,
/// then take eigenvalues / first components of the Jacobi matrix and map
/// back using the scale covariance x -> a x, c -> a^(1-alpha) c.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule gauss_rule_weighted(double a, double b, double alpha, int m) {
    if (!(a > 0.0) || !(b > a))
        throw std::invalid_argument("gauss_rule_weighted requires 0 < a < b");
    if (m < 1)
        throw std::invalid_argument("gauss_rule_weighted requires m >= 1");

    const double lambda = b / a;
    detail::DiscreteMeasure d = detail::discretize_weight(lambda, alpha, m);
    const int npts = int(d.u.size());

    // Affine map to [-1,1] keeps polynomial values tame for wide intervals.
    std::vector<double> t(npts);
    for (int i = 0; i < npts; ++i)
        t[i] = 2.0 * (d.u[i] - 1.0) / (lambda - 1.0) - 1.0;

    // Stieltjes: monic recurrence p_{k+1} = (t - ak) p_k - bk p_{k-1}.
    std::vector<double> p_prev(npts, 0.0), p_cur(npts, 1.0);
    std::vector<double> ak(m), bk(m);
    double norm_prev = 0.0;
    for (int k = 0; k < m; ++k) {
        double norm = 0.0, tnorm = 0.0;
        for (int i = 0; i < npts; ++i) {
            const double pw = d.w[i] * p_cur[i] * p_cur[i];
            norm += pw;
            tnorm += pw * t[i];
        }
        ak[k] = tnorm / norm;
        bk[k] = (k == 0) ? norm : norm / norm_prev;
        if (k + 1 < m) {
            for (int i = 0; i < npts; ++i) {
                const double p_next = (t[i] - ak[k]) * p_cur[i] - bk[k] * p_prev[i];
                p_prev[i] = p_cur[i];
                p_cur[i] = p_next;
            }
        }
        norm_prev = norm;
    }

    // Golub-Welsch on the symmetric tridiagonal Jacobi matrix.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
        jacobi(k, k) = ak[k];
        if (k > 0) {
            const double off = std::sqrt(bk[k]);
            jacobi(k, k - 1) = off;
            jacobi(k - 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    if (eig.info() != Eigen::Success)
        throw numerical_failure("Jacobi matrix eigensolver failed for m=" + std::to_string(m));

    // Total mass from the analytic moment pins down k=0 exactness.
    const double mass = weighted_moments(1.0, lambda, alpha, 1)[0];
    const double scale_w = std::pow(a, 1.0 - alpha);

    GaussRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int j = 0; j < m; ++j) {
        const double tau = eig.eigenvalues()(j);  // ascending
        const double u = 1.0 + (lambda - 1.0) * (tau + 1.0) / 2.0;
        const double q0 = eig.eigenvectors()(0, j);
        rule.nodes[j] = a * u;
        rule.weights[j] = scale_w * mass * q0 * q0;
    }
    return rule;
}

/// Nodes, Gauss weights, and kernel weights defining the OU-sum
/// approximation K_n(t) = sum_j wtilde_j exp(-t x_j) of t^(H-1/2).
struct QuadratureScheme {
    ModelParams params;
    int n = 0;
    int m = 0;
    double r = 0.0;
    GeometricGrid grid;
    std::vector<double> nodes;           // n*m mean-reversion speeds, increasing
    std::vector<double> gauss_weights;   // c_j >= 0, rule weights w.r.t. x^(-alpha)
    std::vector<double> kernel_weights;  // wtilde_j = c_j / Gamma(1-alpha)

    std::string id() const {
        std::ostringstream os;
        os << "H" << params.H << "_n" << n << "_m" << m << "_r" << r;
        return os.str();
    }
};

inline QuadratureScheme build_scheme(const ModelParams& params, int n, int m, double r = -1.0) {
    if (m < 1)
        throw std::invalid_argument("build_scheme requires m >= 1");
    if (m > 10)
        std::cerr << "build_scheme: m = " << m
                  << " exceeds 10; moment residuals may exceed tolerance in double precision\n";
    if (r <= 0.0)
        r = predicted_rate(params.H, m);

    QuadratureScheme scheme;
    scheme.params = params;
    scheme.n = n;
    scheme.m = m;
    scheme.r = r;
    scheme.grid = geometric_grid(params, n, r);
    scheme.nodes.reserve(size_t(n) * m);
    scheme.gauss_weights.reserve(size_t(n) * m);

    for (int i = 0; i < n; ++i) {
        GaussRule rule = gauss_rule_weighted(scheme.grid.xi[i], scheme.grid.xi[i + 1],
                                             params.alpha, m);
        scheme.nodes.insert(scheme.nodes.end(), rule.nodes.begin(), rule.nodes.end());
        scheme.gauss_weights.insert(scheme.gauss_weights.end(), rule.weights.begin(),
                                    rule.weights.end());
    }

    const double g = gamma_fn(1.0 - params.alpha);
    scheme.kernel_weights.resize(scheme.gauss_weights.size());
    for (size_t j = 0; j < scheme.gauss_weights.size(); ++j)
        scheme.kernel_weights[j] = scheme.gauss_weights[j] / g;
    return scheme;
}

/// K_n(t) = sum_j wtilde_j exp(-t x_j).
inline double kernel_eval(const QuadratureScheme& scheme, double t) {
    if (t < 0.0)
        throw std::invalid_argument("kernel_eval requires t >= 0");
    double sum = 0.0;
    for (size_t j = 0; j < scheme.nodes.size(); ++j)
        sum += scheme.kernel_weights[j] * std::exp(-t * scheme.nodes[j]);
    return sum;
}

}  // namespace fbmou
