#pragma once

// Kravchuk polynomials: the orthogonal family of the binomial weight
// bin(n,p), their order-2 normalized member and its moments.
//
// The defining sum is
//   K_k(x;n) = sum_j (-1)^j (p/(1-p))^{k-j} C(x,j) C(n-x,k-j)
// with closed forms for k = 0,1,2:
//   K_0 = 1,  K_1 = (np-x)/(1-p),
//   K_2 = ((2p-1)(x-np) + (x-np)^2 - np(1-p)) / (2(1-p)^2).

#include "hypergeo/distributions.hpp"

namespace hypergeo {

struct KravchukContext {
    int64_t n = 0;
    double p = 0.0;

    void validate() const {
        if (n < 1) throw InvalidParams("KravchukContext: need n >= 1");
        if (!(p > 0.0 && p < 1.0))
            throw InvalidParams("KravchukContext: need 0 < p < 1");
    }
};

/// K_k(x;n) by the defining sum. Integer x uses exact small binomials; real x
/// goes through generalized coefficients (plotting convenience).
inline double kravchuk(const KravchukContext& ctx, int64_t k, double x) {
    ctx.validate();
    if (k < 0 || k > ctx.n) throw InvalidOrder("kravchuk: need 0 <= k <= n");
    const long double ratio = static_cast<long double>(ctx.p) / (1.0L - ctx.p);
    std::vector<long double> terms;
    terms.reserve(static_cast<std::size_t>(k) + 1);
    for (int64_t j = 0; j <= k; ++j) {
        long double t = (j % 2 == 0) ? 1.0L : -1.0L;
        t *= std::pow(ratio, static_cast<long double>(k - j));
        t *= static_cast<long double>(generalized_binomial(x, j));
        t *= static_cast<long double>(
            generalized_binomial(static_cast<double>(ctx.n) - x, k - j));
        terms.push_back(t);
    }
    return static_cast<double>(stable_sum(std::move(terms)));
}

/// sum_x bin(n,p,x) K_r(x) K_s(x); equals (p/(1-p))^r C(n,r) delta_{r,s}.
inline double kravchuk_orthogonality(const KravchukContext& ctx, int64_t r, int64_t s) {
    ctx.validate();
    if (r < 0 || r > ctx.n || s < 0 || s > ctx.n)
        throw InvalidOrder("kravchuk_orthogonality: orders in 0..n");
    std::vector<long double> terms;
    terms.reserve(static_cast<std::size_t>(ctx.n) + 1);
    for (int64_t x = 0; x <= ctx.n; ++x) {
        long double w = std::exp(static_cast<long double>(log_pmf_bin(ctx.n, ctx.p, x)));
        terms.push_back(w * static_cast<long double>(kravchuk(ctx, r, static_cast<double>(x))) *
                        static_cast<long double>(kravchuk(ctx, s, static_cast<double>(x))));
    }
    return static_cast<double>(stable_sum(std::move(terms)));
}

/// K_2 scaled to unit second moment under bin(n,p). Accepts real x.
inline double kravchuk2_normalized(const KravchukContext& ctx, double x) {
    ctx.validate();
    if (ctx.n < 2) throw InvalidOrder("kravchuk2_normalized: need n >= 2");
    const double n = static_cast<double>(ctx.n);
    const double p = ctx.p;
    const double npq = n * p * (1.0 - p);
    const double d = x - n * p;
    const double nrm = std::sqrt(2.0 * (n - 1.0) / n);
    return (((2.0 * p - 1.0) * d + d * d) / npq - 1.0) / nrm;
}

struct Kravchuk2Min {
    double continuous_min;    ///< value at the real stationary point (n-1)p + 1/2
    double integer_min;       ///< minimum over integer x in [0, n]
    int64_t argmin_integer;   ///< attaining integer (np when np is integral)
    bool np_is_integer;
};

inline Kravchuk2Min kravchuk2_min(const KravchukContext& ctx) {
    ctx.validate();
    if (ctx.n < 2) throw InvalidOrder("kravchuk2_min: need n >= 2");
    const double n = static_cast<double>(ctx.n);
    const double p = ctx.p;
    Kravchuk2Min m;
    const double nrm = std::sqrt(2.0 * (n - 1.0) / n);
    m.continuous_min = -((0.5 - p) * (0.5 - p) / (n * p * (1.0 - p)) + 1.0) / nrm;
    // The integer minimum sits on the integer(s) adjacent to the stationary
    // point; when np is an integer that integer is np itself.
    const double stat = (n - 1.0) * p + 0.5;
    int64_t lo = std::clamp<int64_t>(static_cast<int64_t>(std::floor(stat)), 0, ctx.n);
    int64_t hi = std::clamp<int64_t>(static_cast<int64_t>(std::ceil(stat)), 0, ctx.n);
    double vlo = kravchuk2_normalized(ctx, static_cast<double>(lo));
    double vhi = kravchuk2_normalized(ctx, static_cast<double>(hi));
    if (vlo <= vhi) {
        m.integer_min = vlo;
        m.argmin_integer = lo;
    } else {
        m.integer_min = vhi;
        m.argmin_integer = hi;
    }
    m.np_is_integer = std::fabs(n * p - std::round(n * p)) < 1e-9;
    return m;
}

/// E[K~_2(X;n)] for X ~ hyp(N,K,n): equals -sqrt(n(n-1)) / (sqrt(2) (N-1)).
inline double kravchuk2_expect_hyp(const HypParams& par) {
    par.validate();
    if (par.n < 2 || par.N < 2) throw InvalidParams("kravchuk2_expect_hyp: need n,N >= 2");
    if (par.K < 1 || par.K > par.N - 1)
        throw InvalidParams("kravchuk2_expect_hyp: need 0 < K < N");
    const double n = static_cast<double>(par.n);
    const double N = static_cast<double>(par.N);
    return -std::sqrt(n * (n - 1.0)) / (std::sqrt(2.0) * (N - 1.0));
}

/// E[(2(1-p)^2 K_2)^3] under bin(n,p), closed form:
///   4 n (n-1) p^2 (1-p)^2 (1 + 2 (n-4) p (1-p)).
/// Zero exactly at n = 2, p = 1/2, strictly positive for n > 2.
inline double kravchuk2_third_moment(const KravchukContext& ctx) {
    ctx.validate();
    if (ctx.n < 2) throw InvalidOrder("kravchuk2_third_moment: need n >= 2");
    const double n = static_cast<double>(ctx.n);
    const double pq = ctx.p * (1.0 - ctx.p);
    return 4.0 * n * (n - 1.0) * pq * pq * (1.0 + 2.0 * (n - 4.0) * pq);
}

}  // namespace hypergeo
