#pragma once

// Information divergence and chi^2-divergence between finite measures, the
// hypergeometric-vs-approximation divergences, and the exchangeability chain
// decomposition with its per-step conditional mutual information.
//
// For positive measures D(P||Q) = sum p ln(p/q) - p + q; the -p+q terms
// cancel for probability measures, where the sum over P's support suffices.

#include <map>

#include "hypergeo/distributions.hpp"

namespace hypergeo {

struct DivergenceResult {
    double nats = 0.0;
    std::size_t support_size = 0;   ///< points the sum ranged over
    std::size_t terms_dropped = 0;  ///< zero-mass terms (0 ln 0 = 0 convention)
};

namespace detail {

inline std::map<std::vector<int64_t>, double> table_map(const PmfTable& t) {
    std::map<std::vector<int64_t>, double> m;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!m.emplace(t.support[i], t.log_mass[i]).second)
            throw InvalidParams("PmfTable: duplicate support point");
    }
    return m;
}

}  // namespace detail

/// D(P||Q) for positive measures over Q's support.
/// Requires P's positive mass to live inside Q's positive support.
inline DivergenceResult kl(const PmfTable& P, const PmfTable& Q) {
    auto pm = detail::table_map(P);
    auto qm = detail::table_map(Q);
    for (const auto& [x, lp] : pm) {
        if (lp == kNegInf) continue;
        auto it = qm.find(x);
        if (it == qm.end() || it->second == kNegInf)
            throw AbsoluteContinuityViolated("kl: P has mass where Q vanishes");
    }
    DivergenceResult res;
    std::vector<long double> terms;
    terms.reserve(qm.size());
    for (const auto& [x, lq] : qm) {
        long double q = std::exp(static_cast<long double>(lq));
        auto it = pm.find(x);
        if (it == pm.end() || it->second == kNegInf) {
            ++res.terms_dropped;
            terms.push_back(q);
            continue;
        }
        long double lp = it->second;
        long double p = std::exp(lp);
        terms.push_back(p * (lp - static_cast<long double>(lq)) - p + q);
    }
    res.support_size = qm.size();
    res.nats = static_cast<double>(stable_sum(std::move(terms)));
    return res;
}

/// chi^2(P,Q) = sum (p/q - 1)^2 q over Q's support.
inline double chi2(const PmfTable& P, const PmfTable& Q) {
    auto pm = detail::table_map(P);
    auto qm = detail::table_map(Q);
    for (const auto& [x, lp] : pm) {
        if (lp == kNegInf) continue;
        auto it = qm.find(x);
        if (it == qm.end() || it->second == kNegInf)
            throw AbsoluteContinuityViolated("chi2: P has mass where Q vanishes");
    }
    std::vector<long double> terms;
    terms.reserve(qm.size());
    for (const auto& [x, lq] : qm) {
        if (lq == kNegInf) continue;  // q = 0 implies p = 0 here
        long double q = std::exp(static_cast<long double>(lq));
        auto it = pm.find(x);
        long double p = (it == pm.end()) ? 0.0L : std::exp(static_cast<long double>(it->second));
        long double d = p - q;
        terms.push_back(d * d / q);
    }
    return static_cast<double>(stable_sum(std::move(terms)));
}

// ---------------------------------------------------------------------------
// Hypergeometric vs approximations (probability measures, exact enumeration)
// ---------------------------------------------------------------------------

inline DivergenceResult d_hyp_bin(const HypParams& par) {
    par.validate();
    DivergenceResult res;
    std::vector<long double> terms;
    const double p = par.p();
    for (int64_t x = par.support_min(); x <= par.support_max(); ++x) {
        long double lp = log_pmf_hyp(par, x);
        long double lq = log_pmf_bin(par.n, p, x);
        terms.push_back(std::exp(lp) * (lp - lq));
        ++res.support_size;
    }
    res.nats = static_cast<double>(stable_sum(std::move(terms)));
    return res;
}

/// D(hyp || Po(nK/N)). The Poisson tail needs no truncation: both are
/// probability measures, so the sum over the hypergeometric support is exact.
inline DivergenceResult d_hyp_poisson(const HypParams& par) {
    par.validate();
    DivergenceResult res;
    const double lambda = static_cast<double>(par.n) * par.p();
    std::vector<long double> terms;
    for (int64_t x = par.support_min(); x <= par.support_max(); ++x) {
        long double lp = log_pmf_hyp(par, x);
        long double lq = log_pmf_poisson(lambda, x);
        terms.push_back(std::exp(lp) * (lp - lq));
        ++res.support_size;
    }
    res.nats = static_cast<double>(stable_sum(std::move(terms)));
    return res;
}

inline DivergenceResult d_multihyp_multinomial(const MultiHypParams& par,
                                               std::uint64_t cap = support_cap()) {
    par.validate();
    PmfTable sup = enumerate_support(par, cap);
    std::vector<double> probs = par.probabilities();
    DivergenceResult res;
    res.support_size = sup.size();
    std::vector<long double> terms;
    terms.reserve(sup.size());
    for (std::size_t i = 0; i < sup.size(); ++i) {
        long double lp = sup.log_mass[i];
        if (lp == kNegInf) {
            ++res.terms_dropped;
            continue;
        }
        long double lq = log_pmf_multinomial(par.n, probs, sup.support[i]);
        terms.push_back(std::exp(lp) * (lp - lq));
    }
    res.nats = static_cast<double>(stable_sum(std::move(terms)));
    return res;
}

// ---------------------------------------------------------------------------
// Chain decomposition
// ---------------------------------------------------------------------------

/// I(X_j; X_{j+1} | X^{j-1}) for the without-replacement color sequence.
///
/// Conditions on the count vector h of the first j-1 draws (multivariate
/// hypergeometric weight); given h the pair of draws j, j+1 has joint
/// ((k_a-h_a)/(N-j+1)) * ((k_b-h_b-[a==b])/(N-j)) with equal marginals.
inline double conditional_mi_term(const MultiHypParams& par, int64_t j) {
    par.validate();
    if (j < 1 || j > par.n - 1) throw InvalidStep("conditional_mi_term: need 1 <= j <= n-1");
    const std::size_t C = par.colors();
    MultiHypParams prefix{par.N, par.k, j - 1};
    PmfTable hs = enumerate_support(prefix);
    const long double Nr = static_cast<long double>(par.N - (j - 1));
    std::vector<long double> terms;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        long double w = std::exp(static_cast<long double>(hs.log_mass[i]));
        const auto& h = hs.support[i];
        for (std::size_t a = 0; a < C; ++a) {
            long double ra = static_cast<long double>(par.k[a] - h[a]);
            if (ra <= 0) continue;
            for (std::size_t b = 0; b < C; ++b) {
                long double rb = static_cast<long double>(par.k[b] - h[b]) - (a == b ? 1.0L : 0.0L);
                if (rb <= 0) continue;
                long double pab = (ra / Nr) * (rb / (Nr - 1.0L));
                long double ma = ra / Nr;
                long double mb = static_cast<long double>(par.k[b] - h[b]) / Nr;
                terms.push_back(w * pab * std::log(pab / (ma * mb)));
            }
        }
    }
    return static_cast<double>(stable_sum(std::move(terms)));
}

struct ChainDecomposition {
    std::vector<double> terms;  ///< I_j for j = 1..n-1
    double weighted_sum = 0.0;  ///< sum (n-j) I_j, equals D(U_n || V_n)
};

inline ChainDecomposition chain_decompose(const MultiHypParams& par) {
    par.validate();
    if (par.n < 1) throw InvalidParams("chain_decompose: need n >= 1");
    ChainDecomposition out;
    std::vector<long double> weighted;
    for (int64_t j = 1; j <= par.n - 1; ++j) {
        double ij = conditional_mi_term(par, j);
        out.terms.push_back(ij);
        weighted.push_back(static_cast<long double>(par.n - j) * ij);
    }
    out.weighted_sum = static_cast<double>(stable_sum(std::move(weighted)));
    return out;
}

}  // namespace hypergeo
