#pragma once

#include <cmath>
#include <vector>

namespace fbmou {

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
/// Legendre recurrence.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};

inline GaussLegendre gauss_legendre(int npts) {
    GaussLegendre rule;
    rule.x.resize(npts);
    rule.w.resize(npts);
    const int mid = (npts + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        // Chebyshev-based initial guess for the i-th root.
        double z = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (z * p0 - p1) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p0 / pp;
            if (std::fabs(z - z1) < 1e-15)
                break;
        }
        rule.x[i] = -z;
        rule.x[npts - 1 - i] = z;
        rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[npts - 1 - i] = rule.w[i];
    }
    return rule;
}

}  // namespace fbmou
