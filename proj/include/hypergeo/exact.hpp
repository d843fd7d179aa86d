#pragma once

// Exact integer/rational reference path.
//
// Point masses are built from big-integer binomial coefficients, so the
// probability ratios entering each log are exact rationals; only the final
// logarithms are evaluated in extended precision. This is the independent
// cross-check for the floating-point pipeline (agreement expected at the
// 1e-12 relative level on desk-scale instances).

#include <gmpxx.h>

#include "hypergeo/distributions.hpp"

namespace hypergeo::exact {

/// ln of a positive big integer, accurate to a few ulps of long double.
/// Uses the top 64 bits exactly, so the truncation error is below 2^-63.
inline long double log_mpz(const mpz_class& z) {
    static_assert(sizeof(unsigned long) == 8, "needs 64-bit unsigned long");
    if (z <= 0) throw InvalidParams("log_mpz: argument must be positive");
    constexpr long double kLn2 = 0.6931471805599453094172321214581766L;
    std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
    if (bits <= 64)
        return std::log(static_cast<long double>(mpz_get_ui(z.get_mpz_t())));
    std::size_t shift = bits - 64;
    mpz_class top = z >> shift;
    long double mant = static_cast<long double>(mpz_get_ui(top.get_mpz_t()));
    return std::log(mant) + static_cast<long double>(shift) * kLn2;
}

inline long double log_mpq(const mpq_class& q) {
    if (q <= 0) throw InvalidParams("log_mpq: argument must be positive");
    return log_mpz(mpq_class(q).get_num()) - log_mpz(mpq_class(q).get_den());
}

/// Rational to long double with ~2^-63 relative error.
inline long double to_long_double(const mpq_class& q) {
    if (q == 0) return 0.0L;
    return std::exp(log_mpq(q));
}

inline mpz_class binom(int64_t a, int64_t b) {
    if (b < 0 || b > a) return mpz_class(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return r;
}

inline mpq_class pmf_hyp(const HypParams& par, int64_t x) {
    par.validate();
    if (x < par.support_min() || x > par.support_max())
        throw OutOfSupport("exact::pmf_hyp: x outside support");
    mpq_class r(binom(par.K, x) * binom(par.N - par.K, par.n - x), binom(par.N, par.n));
    r.canonicalize();
    return r;
}

/// bin(n, K/N) at x as an exact rational.
inline mpq_class pmf_bin(int64_t n, int64_t K, int64_t N, int64_t x) {
    mpz_class num = binom(n, x);
    mpz_class a, b, den;
    mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(K), static_cast<unsigned long>(x));
    mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(N - K),
                  static_cast<unsigned long>(n - x));
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(N), static_cast<unsigned long>(n));
    mpq_class r(num * a * b, den);
    r.canonicalize();
    return r;
}

inline mpq_class pmf_multi_hyp(const MultiHypParams& par, std::span<const int64_t> h) {
    par.validate();
    mpz_class num(1);
    for (std::size_t c = 0; c < h.size(); ++c) num *= binom(par.k[c], h[c]);
    mpq_class r(num, binom(par.N, par.n));
    r.canonicalize();
    return r;
}

/// Multinomial(n, (k_c/N)) at h as an exact rational.
inline mpq_class pmf_multinomial(int64_t n, const std::vector<int64_t>& k, int64_t N,
                                 std::span<const int64_t> h) {
    mpz_class coef;
    mpz_fac_ui(coef.get_mpz_t(), static_cast<unsigned long>(n));
    mpz_class num = coef;
    for (std::size_t c = 0; c < h.size(); ++c) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(h[c]));
        mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), f.get_mpz_t());
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(k[c]),
                      static_cast<unsigned long>(h[c]));
        num *= pw;
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(N), static_cast<unsigned long>(n));
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------------------
// Exact divergences (probability-measure KL as sum over P's support)
// ---------------------------------------------------------------------------

inline long double d_hyp_bin(const HypParams& par) {
    par.validate();
    std::vector<long double> terms;
    for (int64_t x = par.support_min(); x <= par.support_max(); ++x) {
        mpq_class p = pmf_hyp(par, x);
        if (p == 0) continue;
        mpq_class q = pmf_bin(par.n, par.K, par.N, x);
        if (q == 0) throw AbsoluteContinuityViolated("exact::d_hyp_bin");
        terms.push_back(to_long_double(p) * log_mpq(mpq_class(p / q)));
    }
    return stable_sum(std::move(terms));
}

inline long double d_hyp_poisson(const HypParams& par) {
    par.validate();
    mpq_class lambda(par.n * par.K, par.N);
    lambda.canonicalize();
    if (lambda == 0) return 0.0L;  // point mass at 0 vs Po(0)
    long double llam = log_mpq(lambda);
    long double lam = to_long_double(lambda);
    std::vector<long double> terms;
    for (int64_t x = par.support_min(); x <= par.support_max(); ++x) {
        mpq_class p = pmf_hyp(par, x);
        if (p == 0) continue;
        mpz_class fx;
        mpz_fac_ui(fx.get_mpz_t(), static_cast<unsigned long>(x));
        long double lq = static_cast<long double>(x) * llam - lam - log_mpz(fx);
        terms.push_back(to_long_double(p) * (log_mpq(p) - lq));
    }
    return stable_sum(std::move(terms));
}

inline long double d_multihyp_multinomial(const MultiHypParams& par,
                                          std::uint64_t cap = support_cap()) {
    par.validate();
    PmfTable sup = enumerate_support(par, cap);
    std::vector<long double> terms;
    for (std::size_t i = 0; i < sup.size(); ++i) {
        mpq_class p = pmf_multi_hyp(par, sup.support[i]);
        if (p == 0) continue;
        mpq_class q = pmf_multinomial(par.n, par.k, par.N, sup.support[i]);
        if (q == 0) throw AbsoluteContinuityViolated("exact::d_multihyp_multinomial");
        terms.push_back(to_long_double(p) * log_mpq(mpq_class(p / q)));
    }
    return stable_sum(std::move(terms));
}

/// High-precision log pmf for testing the double-precision path at large N.
inline long double log_pmf_hyp_ld(const HypParams& par, int64_t x) {
    par.validate();
    if (x < par.support_min() || x > par.support_max())
        throw OutOfSupport("exact::log_pmf_hyp_ld: x outside support");
    return log_mpz(binom(par.K, x)) + log_mpz(binom(par.N - par.K, par.n - x)) -
           log_mpz(binom(par.N, par.n));
}

}  // namespace hypergeo::exact
