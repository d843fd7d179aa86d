#pragma once

// phi(x) = x ln x - (x - 1), the integrand of information divergence, with
// the Taylor brackets that drive every bound proof:
//
//   0 <= phi(x),   (1/2)d^2 - (1/6)d^3 <= phi(x) <= min((x-1)^2, ... + (1/3)d^4)
//
// where d = x - 1, all valid on x >= 0 with the convention phi(0) = 1.

#include "hypergeo/common.hpp"

namespace hypergeo {

inline double phi(double x) {
    if (!(x >= 0.0)) throw NegativeInput("phi: x must be >= 0");
    if (x == 0.0) return 1.0;
    const double d = x - 1.0;
    // Near 1 the direct form cancels; switch to the series.
    if (std::fabs(d) < 1e-4)
        return d * d * (0.5 + d * (-1.0 / 6.0 + d * (1.0 / 12.0)));
    return static_cast<double>(static_cast<long double>(x) *
                                   std::log(static_cast<long double>(x)) -
                               (static_cast<long double>(x) - 1.0L));
}

struct PhiEval {
    double x;
    double phi;
    double taylor3_lower;  ///< (1/2)d^2 - (1/6)d^3
    double taylor4_upper;  ///< (1/2)d^2 - (1/6)d^3 + (1/3)d^4
    double chi_upper;      ///< d^2
};

inline PhiEval phi_sandwich(double x) {
    if (!(x >= 0.0)) throw NegativeInput("phi_sandwich: x must be >= 0");
    const double d = x - 1.0;
    PhiEval e;
    e.x = x;
    e.phi = phi(x);
    e.chi_upper = d * d;
    e.taylor3_lower = 0.5 * d * d - d * d * d / 6.0;
    e.taylor4_upper = e.taylor3_lower + d * d * d * d / 3.0;
    return e;
}

/// Derivatives of phi: order 0..5, i.e. phi, ln x, 1/x, -1/x^2, 2/x^3, -6/x^4.
inline double phi_derivative(double x, int order) {
    if (order < 0 || order > 5) throw InvalidOrder("phi_derivative: order in 0..5");
    if (order == 0) return phi(x);
    if (!(x > 0.0)) throw NonpositiveInput("phi_derivative: x must be > 0");
    switch (order) {
        case 1: return std::log(x);
        case 2: return 1.0 / x;
        case 3: return -1.0 / (x * x);
        case 4: return 2.0 / (x * x * x);
        default: return -6.0 / (x * x * x * x);
    }
}

}  // namespace hypergeo
