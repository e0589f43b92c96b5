#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fbmou/errors.hpp"

namespace fbmou {

/// Model parameters derived from the Hurst index H in (0, 1/2).
/// alpha = H + 1/2, gamma = 1/2 - H, delta = H.
struct ModelParams {
    double H;
    double T;
    double alpha;
    double gamma;
    double delta;

    static ModelParams make(double H, double T = 1.0) {
        if (!(H > 0.0 && H < 0.5))
            throw std::invalid_argument("Hurst index must lie in (0, 1/2), got " + std::to_string(H));
        if (!(T > 0.0))
            throw std::invalid_argument("time horizon must be positive");
        return ModelParams{H, T, H + 0.5, 0.5 - H, H};
    }
};

/// Log-equidistant breakpoints between the truncation levels
/// xi_0 = n^(-r/gamma) and xi_n = n^(r/delta).
struct GeometricGrid {
    int n;
    double r;
    std::vector<double> xi;  // n+1 strictly increasing breakpoints
};

inline GeometricGrid geometric_grid(const ModelParams& params, int n, double r) {
    if (n < 2)
        throw std::invalid_argument("interval count n must be >= 2 (n = 1 collapses the grid)");
    if (!(r > 0.0))
        throw std::invalid_argument("rate r must be positive");

    const double xi0 = std::pow(double(n), -r / params.gamma);
    const double xin = std::pow(double(n), r / params.delta);
    const double log_ratio = std::log(xin / xi0);

    std::vector<double> xi(n + 1);
    for (int i = 0; i <= n; ++i)
        xi[i] = xi0 * std::exp(log_ratio * double(i) / double(n));
    xi[0] = xi0;
    xi[n] = xin;
    return GeometricGrid{n, r, std::move(xi)};
}

/// Admissible-rate supremum r = 2Hm/3 for m-point rules.
inline double predicted_rate(double H, int m) {
    if (!(H > 0.0 && H < 0.5))
        throw std::invalid_argument("Hurst index must lie in (0, 1/2)");
    if (m < 1)
        throw std::invalid_argument("m must be >= 1");
    return 2.0 * H * double(m) / 3.0;
}

}  // namespace fbmou
