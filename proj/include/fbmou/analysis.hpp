#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "fbmou/errors.hpp"
#include "fbmou/quadrature.hpp"
#include "fbmou/special.hpp"

namespace fbmou {

/// One row of the deterministic error sweep: the L2(Omega) distance
/// between W^H_T and W^{H,n}_T and its relative counterpart.
struct ErrorRecord {
    double H;
    int m;
    int n;
    double r;
    double T;
    double abs_error;
    double rel_error;
};

struct RateFit {
    double slope;      // fitted decay exponent (positive for decreasing error)
    double intercept;  // log-scale constant
    double residual;   // RMS residual of the log-log fit
};

namespace detail {

class KahanSum {
public:
    void add(double v) {
        const double y = v - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace detail

/// Closed-form L2 error via the Ito isometry:
/// abs^2 = T^(2H)/(2H) - 2 sum_j w_j x_j^(-a) igamma(a, x_j T)
///         + sum_{j,l} w_j w_l (1 - exp(-(x_j+x_l)T))/(x_j+x_l),   a = H + 1/2.
inline ErrorRecord l2_error(const QuadratureScheme& scheme, double T) {
    if (!(T > 0.0))
        throw std::invalid_argument("l2_error requires T > 0");
    const double H = scheme.params.H;
    const double alpha = scheme.params.alpha;
    const size_t nm = scheme.nodes.size();

    const double var_true = std::pow(T, 2.0 * H) / (2.0 * H);

    detail::KahanSum cross;
    for (size_t j = 0; j < nm; ++j) {
        const double x = scheme.nodes[j];
        cross.add(scheme.kernel_weights[j] * std::pow(x, -alpha) *
                  lower_incomplete_gamma(alpha, x * T));
    }

    detail::KahanSum self;
    for (size_t j = 0; j < nm; ++j) {
        for (size_t l = 0; l < nm; ++l) {
            const double z = scheme.nodes[j] + scheme.nodes[l];
            self.add(scheme.kernel_weights[j] * scheme.kernel_weights[l] *
                     (-std::expm1(-z * T)) / z);
        }
    }

    double err2 = var_true - 2.0 * cross.value() + self.value();
    if (err2 < 0.0) {
        if (err2 < -1e-12 * var_true)
            throw numerical_failure("l2_error: catastrophic cancellation, err^2 = " +
                                    std::to_string(err2));
        err2 = 0.0;
    }

    ErrorRecord rec;
    rec.H = H;
    rec.m = scheme.m;
    rec.n = scheme.n;
    rec.r = scheme.r;
    rec.T = T;
    rec.abs_error = std::sqrt(err2);
    rec.rel_error = rec.abs_error / std::sqrt(var_true);
    return rec;
}

inline std::vector<ErrorRecord> error_sweep(double H, int m, const std::vector<int>& n_list,
                                            double T = 1.0, double r = -1.0) {
    std::vector<ErrorRecord> records;
    records.reserve(n_list.size());
    const ModelParams params = ModelParams::make(H, T);
    for (int n : n_list)
        records.push_back(l2_error(build_scheme(params, n, m, r), T));
    return records;
}

/// Least-squares slope of log(rel_error) against log(n); the reported
/// slope is the decay exponent, i.e. the negative of the OLS slope.
inline RateFit fit_rate(const std::vector<ErrorRecord>& records) {
    if (records.size() < 2)
        throw std::invalid_argument("fit_rate requires at least 2 records");
    std::vector<double> lx, ly;
    for (const auto& rec : records) {
        if (!(rec.rel_error > 0.0))
            throw std::invalid_argument("fit_rate requires positive errors");
        lx.push_back(std::log(double(rec.n)));
        ly.push_back(std::log(rec.rel_error));
    }
    const size_t npts = lx.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < npts; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(npts);
    my /= double(npts);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < npts; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_rate requires at least 2 distinct n");
    const double beta = sxy / sxx;
    const double alpha0 = my - beta * mx;
    double ss = 0.0;
    for (size_t i = 0; i < npts; ++i) {
        const double res = ly[i] - (alpha0 + beta * lx[i]);
        ss += res * res;
    }
    return RateFit{-beta, alpha0, std::sqrt(ss / double(npts))};
}

}  // namespace fbmou
