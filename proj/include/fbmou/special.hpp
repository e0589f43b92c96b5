#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbmou/errors.hpp"

namespace fbmou {

/// Gamma function for positive arguments.
inline double gamma_fn(double s) {
    if (!(s > 0.0))
        throw std::invalid_argument("gamma_fn requires s > 0");
    return std::tgamma(s);
}

namespace detail {

// Series expansion of P(s,x) = gamma(s,x)/Gamma(s), valid for x < s+1.
inline double gamma_p_series(double s, double x) {
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Continued fraction for Q(s,x) = 1 - P(s,x), modified Lentz, valid for x >= s+1.
inline double gamma_q_contfrac(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -double(i) * (double(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace detail

/// Lower incomplete gamma function gamma(s, x) = int_0^x t^(s-1) e^(-t) dt.
/// Power series for small x, continued fraction for the upper tail otherwise.
inline double lower_incomplete_gamma(double s, double x) {
    if (!(s > 0.0))
        throw std::invalid_argument("lower_incomplete_gamma requires s > 0");
    if (x < 0.0)
        throw std::invalid_argument("lower_incomplete_gamma requires x >= 0");
    if (x == 0.0)
        return 0.0;
    const double g = std::tgamma(s);
    // gamma(s,x) saturates at Gamma(s) well before x ~ 700.
    if (x > 700.0)
        return g;
    if (x < s + 1.0)
        return g * detail::gamma_p_series(s, x);
    return g * (1.0 - detail::gamma_q_contfrac(s, x));
}

}  // namespace fbmou
