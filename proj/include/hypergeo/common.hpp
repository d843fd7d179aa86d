#pragma once

// Shared numeric kernels and the error hierarchy.
//
// Everything in this library is a pure function of its arguments; the only
// process-global state is the support cap, which is read once from the
// environment and never mutated afterwards.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypergeo {

using std::int64_t;

class Error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error { using Error::Error; };
class OutOfSupport : public Error { using Error::Error; };
class SupportTooLarge : public Error { using Error::Error; };
class AbsoluteContinuityViolated : public Error { using Error::Error; };
class InvalidOrder : public Error { using Error::Error; };
class InvalidStep : public Error { using Error::Error; };
class InvalidCase : public Error { using Error::Error; };
class ZeroColorProbability : public Error { using Error::Error; };
class PreconditionNotMet : public Error { using Error::Error; };
class NegativeInput : public Error { using Error::Error; };
class NonpositiveInput : public Error { using Error::Error; };
class DegenerateDenominator : public Error { using Error::Error; };

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Maximum number of support points an enumeration may materialize.
/// Override with the HYPERGEO_SUPPORT_CAP environment variable.
inline std::uint64_t support_cap() {
    static const std::uint64_t cap = [] {
        if (const char* s = std::getenv("HYPERGEO_SUPPORT_CAP")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(s, &end, 10);
            if (end != s && v > 0) return static_cast<std::uint64_t>(v);
        }
        return static_cast<std::uint64_t>(10'000'000);
    }();
    return cap;
}

/// ln k! in extended precision.
inline long double log_factorial(int64_t k) {
    if (k < 0) throw NegativeInput("log_factorial: negative argument");
    return std::lgamma(static_cast<long double>(k) + 1.0L);
}

/// ln C(a, b) in extended precision; -inf outside the triangle.
inline long double log_binomial(int64_t a, int64_t b) {
    if (b < 0 || b > a) return -std::numeric_limits<long double>::infinity();
    return log_factorial(a) - log_factorial(b) - log_factorial(a - b);
}

/// Generalized binomial coefficient C(x, j) for real x, integer j >= 0.
/// Exact for integer x representable in double (vanishes for 0 <= x < j).
inline double generalized_binomial(double x, int64_t j) {
    if (j < 0) return 0.0;
    long double r = 1.0L;
    for (int64_t i = 0; i < j; ++i) r *= (static_cast<long double>(x) - i) / (j - i);
    return static_cast<double>(r);
}

// Addends sorted by magnitude, then Neumaier-compensated accumulation.
// This keeps identity checks reproducible at the 1e-10 level regardless of
// enumeration order.
inline long double stable_sum(std::vector<long double> terms) {
    std::sort(terms.begin(), terms.end(),
              [](long double a, long double b) { return std::fabs(a) < std::fabs(b); });
    long double sum = 0.0L, comp = 0.0L;
    for (long double t : terms) {
        long double next = sum + t;
        if (std::fabs(sum) >= std::fabs(t))
            comp += (sum - next) + t;
        else
            comp += (t - next) + sum;
        sum = next;
    }
    return sum + comp;
}

/// x*ln(p) with the 0*ln(0) = 0 convention used throughout.
inline long double xlogy(int64_t x, double p) {
    if (x == 0) return 0.0L;
    if (p == 0.0) return -std::numeric_limits<long double>::infinity();
    return static_cast<long double>(x) * std::log(static_cast<long double>(p));
}

}  // namespace hypergeo
