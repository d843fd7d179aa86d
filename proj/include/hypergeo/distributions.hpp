#pragma once

// Exact log-space point masses, support enumeration and moments for the
// hypergeometric, multivariate hypergeometric, binomial, multinomial and
// Poisson families.
//
// All masses are computed through extended-precision log-factorials and
// returned as doubles; an independent big-integer path lives in exact.hpp.

#include <map>
#include <numeric>
#include <span>

#include "hypergeo/common.hpp"

namespace hypergeo {

/// Population of N balls, K of them white, n drawn without replacement.
struct HypParams {
    int64_t N = 0;  ///< population size
    int64_t K = 0;  ///< white-ball count
    int64_t n = 0;  ///< sample size

    void validate() const {
        if (N < 1 || K < 0 || K > N || n < 0 || n > N)
            throw InvalidParams("HypParams: need N>=1, 0<=K<=N, 0<=n<=N");
    }
    int64_t support_min() const { return std::max<int64_t>(0, n + K - N); }
    int64_t support_max() const { return std::min(n, K); }
    double p() const { return static_cast<double>(K) / static_cast<double>(N); }
};

/// Population of N balls in C colors, n drawn without replacement.
struct MultiHypParams {
    int64_t N = 0;
    std::vector<int64_t> k;  ///< per-color counts, sum to N
    int64_t n = 0;

    void validate() const {
        if (N < 1 || k.empty()) throw InvalidParams("MultiHypParams: need N>=1, C>=1");
        int64_t sum = 0;
        for (int64_t kc : k) {
            if (kc < 0) throw InvalidParams("MultiHypParams: negative color count");
            sum += kc;
        }
        if (sum != N) throw InvalidParams("MultiHypParams: color counts must sum to N");
        if (n < 0 || n > N) throw InvalidParams("MultiHypParams: need 0<=n<=N");
    }
    std::size_t colors() const { return k.size(); }
    double p(std::size_t c) const { return static_cast<double>(k[c]) / static_cast<double>(N); }
    std::vector<double> probabilities() const {
        std::vector<double> out(k.size());
        for (std::size_t c = 0; c < k.size(); ++c) out[c] = p(c);
        return out;
    }
};

/// Finite support plus log point masses; the common currency for exact work.
struct PmfTable {
    std::vector<std::vector<int64_t>> support;
    std::vector<double> log_mass;

    std::size_t size() const { return support.size(); }
    std::size_t dimension() const { return support.empty() ? 0 : support.front().size(); }

    int64_t scalar(std::size_t i) const {
        if (dimension() != 1) throw InvalidParams("PmfTable: not univariate");
        return support[i][0];
    }
    double mass(std::size_t i) const { return std::exp(log_mass[i]); }

    double total_mass() const {
        std::vector<long double> t;
        t.reserve(size());
        for (double lm : log_mass) t.push_back(std::exp(static_cast<long double>(lm)));
        return static_cast<double>(stable_sum(std::move(t)));
    }

    /// Checks mass normalization and support uniqueness.
    void check_invariants(double tol = 1e-10) const {
        if (support.size() != log_mass.size())
            throw InvalidParams("PmfTable: support/log_mass length mismatch");
        if (std::fabs(total_mass() - 1.0) > tol)
            throw InvalidParams("PmfTable: masses do not sum to 1");
        std::map<std::vector<int64_t>, int> seen;
        for (const auto& s : support)
            if (++seen[s] > 1) throw InvalidParams("PmfTable: duplicate support point");
    }

    static PmfTable univariate(std::vector<int64_t> xs, std::vector<double> lms) {
        PmfTable t;
        t.support.reserve(xs.size());
        for (int64_t x : xs) t.support.push_back({x});
        t.log_mass = std::move(lms);
        return t;
    }
};

/// Mean plus central moments by order.
struct MomentSet {
    double mean = 0.0;
    std::map<int, double> central;  // orders 2..6 as available
};

// ---------------------------------------------------------------------------
// Log point masses
// ---------------------------------------------------------------------------

inline double log_pmf_hyp(const HypParams& par, int64_t x) {
    par.validate();
    if (x < par.support_min() || x > par.support_max())
        throw OutOfSupport("log_pmf_hyp: x outside support");
    long double lp = log_binomial(par.K, x) + log_binomial(par.N - par.K, par.n - x) -
                     log_binomial(par.N, par.n);
    return static_cast<double>(lp);
}

inline double log_pmf_multi_hyp(const MultiHypParams& par, std::span<const int64_t> h) {
    par.validate();
    if (h.size() != par.colors())
        throw InvalidParams("log_pmf_multi_hyp: count vector has wrong length");
    int64_t sum = 0;
    for (std::size_t c = 0; c < h.size(); ++c) {
        if (h[c] < 0 || h[c] > par.k[c])
            throw OutOfSupport("log_pmf_multi_hyp: count exceeds color class");
        sum += h[c];
    }
    if (sum != par.n) throw OutOfSupport("log_pmf_multi_hyp: counts must sum to n");
    long double lp = -log_binomial(par.N, par.n);
    for (std::size_t c = 0; c < h.size(); ++c) lp += log_binomial(par.k[c], h[c]);
    return static_cast<double>(lp);
}

inline double log_pmf_bin(int64_t n, double p, int64_t x) {
    if (n < 0 || p < 0.0 || p > 1.0 || !std::isfinite(p))
        throw InvalidParams("log_pmf_bin: need n>=0 and p in [0,1]");
    if (x < 0) throw InvalidParams("log_pmf_bin: x must be nonnegative");
    if (x > n) return kNegInf;
    long double lp = log_binomial(n, x) + xlogy(x, p) + xlogy(n - x, 1.0 - p);
    return static_cast<double>(lp);
}

inline double log_pmf_multinomial(int64_t n, std::span<const double> p,
                                  std::span<const int64_t> h) {
    if (n < 0 || p.empty() || p.size() != h.size())
        throw InvalidParams("log_pmf_multinomial: bad arguments");
    double psum = 0.0;
    for (double pc : p) {
        if (pc < 0.0 || !std::isfinite(pc)) throw InvalidParams("log_pmf_multinomial: bad p");
        psum += pc;
    }
    if (std::fabs(psum - 1.0) > 1e-9)
        throw InvalidParams("log_pmf_multinomial: probabilities must sum to 1");
    int64_t hsum = 0;
    for (int64_t hc : h) {
        if (hc < 0) throw OutOfSupport("log_pmf_multinomial: negative count");
        hsum += hc;
    }
    if (hsum != n) throw OutOfSupport("log_pmf_multinomial: counts must sum to n");
    long double lp = log_factorial(n);
    for (std::size_t c = 0; c < h.size(); ++c) {
        lp -= log_factorial(h[c]);
        lp += xlogy(h[c], p[c]);
    }
    return static_cast<double>(lp);
}

inline double log_pmf_poisson(double lambda, int64_t x) {
    if (lambda < 0.0 || !std::isfinite(lambda))
        throw InvalidParams("log_pmf_poisson: need lambda >= 0");
    if (x < 0) throw InvalidParams("log_pmf_poisson: x must be nonnegative");
    if (lambda == 0.0) return x == 0 ? 0.0 : kNegInf;
    long double lp = xlogy(x, lambda) - static_cast<long double>(lambda) - log_factorial(x);
    return static_cast<double>(lp);
}

// ---------------------------------------------------------------------------
// Support enumeration
// ---------------------------------------------------------------------------

inline PmfTable enumerate_support(const HypParams& par) {
    par.validate();
    std::vector<int64_t> xs;
    std::vector<double> lms;
    for (int64_t x = par.support_min(); x <= par.support_max(); ++x) {
        xs.push_back(x);
        lms.push_back(log_pmf_hyp(par, x));
    }
    return PmfTable::univariate(std::move(xs), std::move(lms));
}

/// All count vectors h with 0 <= h_c <= k_c and sum n, in lexicographic order.
inline PmfTable enumerate_support(const MultiHypParams& par,
                                  std::uint64_t cap = support_cap()) {
    par.validate();
    PmfTable table;
    std::vector<int64_t> h(par.colors(), 0);
    std::vector<int64_t> suffix(par.colors() + 1, 0);  // suffix[c] = sum of k_c..k_{C-1}
    for (std::size_t c = par.colors(); c-- > 0;) suffix[c] = suffix[c + 1] + par.k[c];

    long double lden = log_binomial(par.N, par.n);
    long double lnum = 0.0L;
    auto rec = [&](auto&& self, std::size_t c, int64_t rem) -> void {
        if (c + 1 == par.colors()) {
            if (rem > par.k[c]) return;
            h[c] = rem;
            if (table.support.size() >= cap)
                throw SupportTooLarge("enumerate_support: composition count exceeds cap");
            table.support.push_back(h);
            table.log_mass.push_back(
                static_cast<double>(lnum + log_binomial(par.k[c], rem) - lden));
            return;
        }
        int64_t lo = std::max<int64_t>(0, rem - suffix[c + 1]);
        int64_t hi = std::min(par.k[c], rem);
        for (int64_t v = lo; v <= hi; ++v) {
            h[c] = v;
            long double saved = lnum;
            lnum += log_binomial(par.k[c], v);
            self(self, c + 1, rem - v);
            lnum = saved;
        }
    };
    rec(rec, 0, par.n);
    return table;
}

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

/// Central moment of a univariate table by direct summation (order 1 gives
/// the first central moment, i.e. ~0 for a normalized table).
inline double moments_by_enumeration(const PmfTable& pmf, int order) {
    if (order < 1 || order > 6) throw InvalidOrder("moments_by_enumeration: order in 1..6");
    std::vector<long double> t;
    t.reserve(pmf.size());
    for (std::size_t i = 0; i < pmf.size(); ++i)
        t.push_back(std::exp(static_cast<long double>(pmf.log_mass[i])) *
                    static_cast<long double>(pmf.scalar(i)));
    long double mu = stable_sum(std::move(t));
    std::vector<long double> c;
    c.reserve(pmf.size());
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        long double d = static_cast<long double>(pmf.scalar(i)) - mu;
        long double w = std::exp(static_cast<long double>(pmf.log_mass[i]));
        long double term = w;
        for (int r = 0; r < order; ++r) term *= d;
        c.push_back(term);
    }
    return static_cast<double>(stable_sum(std::move(c)));
}

inline double mean_by_enumeration(const PmfTable& pmf) {
    std::vector<long double> t;
    t.reserve(pmf.size());
    for (std::size_t i = 0; i < pmf.size(); ++i)
        t.push_back(std::exp(static_cast<long double>(pmf.log_mass[i])) *
                    static_cast<long double>(pmf.scalar(i)));
    return static_cast<double>(stable_sum(std::move(t)));
}

/// Mean and central moments 2..4 of hyp(N,K,n).
///
/// Closed forms are used where the denominators allow; for N <= 3 the third
/// and fourth orders silently fall back to enumeration unless
/// `allow_fallback` is false, in which case DegenerateDenominator is thrown.
inline MomentSet moments_closed_form(const HypParams& par, bool allow_fallback = true) {
    par.validate();
    const double N = static_cast<double>(par.N);
    const double n = static_cast<double>(par.n);
    const double K = static_cast<double>(par.K);
    const double p = K / N;
    const double q = 1.0 - p;

    MomentSet m;
    m.mean = n * p;
    if (par.N == 1) {
        m.central[2] = 0.0;
        m.central[3] = 0.0;
        m.central[4] = 0.0;
        return m;
    }
    m.central[2] = n * K * (N - n) * (N - K) / (N * N * (N - 1.0));

    auto degenerate = [&](int order) -> double {
        if (!allow_fallback)
            throw DegenerateDenominator("moments_closed_form: N too small for order " +
                                        std::to_string(order));
        return moments_by_enumeration(enumerate_support(par), order);
    };

    if (par.N >= 3) {
        m.central[3] =
            n * p * q * (1.0 - 2.0 * p) * (N - n) * (N - 2.0 * n) / ((N - 1.0) * (N - 2.0));
    } else {
        m.central[3] = degenerate(3);
    }

    if (par.N >= 4 && par.K >= 1 && par.K <= par.N - 1 && par.n >= 1 && par.n <= par.N - 1) {
        // Standard fourth central moment: excess kurtosis times sigma^4.
        const double s2 = n * p * q * (N - n) / (N - 1.0);
        const double A = (N - 1.0) * (N * (N + 1.0) - 6.0 * n * (N - n) - 6.0 * N * N * p * q) +
                         6.0 * n * p * q * (N - n) * (5.0 * N - 6.0);
        const double exk = A / (n * p * q * (N - n) * (N - 2.0) * (N - 3.0));
        m.central[4] = (exk + 3.0) * s2 * s2;
    } else if (par.K == 0 || par.K == par.N || par.n == 0 || par.n == par.N) {
        m.central[4] = 0.0;  // degenerate point mass in the centered variable
    } else {
        m.central[4] = degenerate(4);
    }
    return m;
}

/// Central moments 2..6 of bin(n,p), closed form.
inline double binomial_central_moment(int64_t n, double p, int order) {
    if (n < 0 || p < 0.0 || p > 1.0) throw InvalidParams("binomial_central_moment");
    const double q = 1.0 - p;
    const double pq = p * q;
    const double nn = static_cast<double>(n);
    switch (order) {
        case 2: return nn * pq;
        case 3: return nn * pq * (1.0 - 2.0 * p);
        case 4: return nn * pq * (1.0 + 3.0 * (nn - 2.0) * pq);
        case 5: return nn * pq * (1.0 - 2.0 * p) * (1.0 + 2.0 * (5.0 * nn - 6.0) * pq);
        case 6:
            return nn * pq *
                   (15.0 * nn * nn * pq * pq + 5.0 * nn * pq * (5.0 - 26.0 * pq) +
                    120.0 * pq * pq - 30.0 * pq + 1.0);
        default: throw InvalidOrder("binomial_central_moment: order in 2..6");
    }
}

}  // namespace hypergeo
