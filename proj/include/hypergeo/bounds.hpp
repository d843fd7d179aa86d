#pragma once

// Closed-form lower and upper bounds on D(hyp || approximation), the summed
// per-step bounds, and the assembled per-instance bounds report.
//
// All bounds are in nats. A bound whose hypotheses fail is reported absent
// (or throws PreconditionNotMet at the function level), never silently
// clamped. Empty color classes reduce the effective color count; the report
// flags that reduction instead of applying (C-1)-scaled formulas to colors
// that cannot occur.

#include <map>
#include <optional>
#include <string>

#include "hypergeo/divergence.hpp"
#include "hypergeo/kravchuk.hpp"

namespace hypergeo {

/// Q = sum 1/p_c - 3C + 2 = C^2 chi^2(1/C, p) + (C-1)(C-2) >= 0.
struct QConstant {
    double value = 0.0;
    double chi2_uniform = 0.0;  ///< chi^2 of p against the uniform vector
};

inline QConstant q_constant(std::span<const double> p) {
    if (p.empty()) throw InvalidParams("q_constant: empty probability vector");
    double sum = 0.0, inv = 0.0, chi = 0.0;
    const double C = static_cast<double>(p.size());
    for (double pc : p) {
        if (!(pc > 0.0)) throw ZeroColorProbability("q_constant: need all p_c > 0");
        sum += pc;
        inv += 1.0 / pc;
        chi += (1.0 / C - pc) * (1.0 / C - pc) / pc;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw InvalidParams("q_constant: p must sum to 1");
    QConstant q;
    q.value = inv - 3.0 * C + 2.0;
    q.chi2_uniform = chi;
    return q;
}

inline double stam_upper(int64_t C, int64_t N, int64_t n) {
    if (C < 1 || N < 1 || n < 1 || n > N) throw InvalidParams("stam_upper");
    if (C == 1 || n == 1) return 0.0;
    return static_cast<double>(C - 1) * static_cast<double>(n) * static_cast<double>(n - 1) /
           (2.0 * static_cast<double>(N - 1) * static_cast<double>(N - n + 1));
}

/// Stam's lower bound; the inner fraction needs N >= 3.
inline double stam_lower(int64_t C, int64_t N, int64_t n, const QConstant& q) {
    if (C < 1 || N < 1 || n < 1 || n > N) throw InvalidParams("stam_lower");
    if (C == 1 || n == 1) return 0.0;
    if (N < 3) throw PreconditionNotMet("stam_lower: needs N >= 3");
    const double c1 = static_cast<double>(C - 1);
    const double inner = 0.5 + (q.value / c1) * static_cast<double>(N - 2 * n + 2) /
                                   (6.0 * static_cast<double>(N - n + 1) *
                                    static_cast<double>(N - 2));
    return c1 * static_cast<double>(n) * static_cast<double>(n - 1) /
           (2.0 * static_cast<double>(N - 1) * static_cast<double>(N - 1)) * inner;
}

/// Poisson-approximation lower bound (1/2)((K + n - lambda - 1)/(N - 1))^2.
inline double poisson_lower(const HypParams& par) {
    par.validate();
    if (par.N < 2) throw InvalidParams("poisson_lower: needs N >= 2");
    const double lambda = static_cast<double>(par.n) * par.p();
    const double t = (static_cast<double>(par.K + par.n) - lambda - 1.0) /
                     static_cast<double>(par.N - 1);
    return 0.5 * t * t;
}

/// Same bound written through lambda alone; needs n, K >= 1.
inline double poisson_lower_rewritten(const HypParams& par) {
    par.validate();
    if (par.N < 2 || par.n < 1 || par.K < 1)
        throw PreconditionNotMet("poisson_lower_rewritten: needs n, K >= 1");
    const double N = static_cast<double>(par.N);
    const double lambda = static_cast<double>(par.n) * par.p();
    const double t = (lambda / static_cast<double>(par.n) + lambda / static_cast<double>(par.K) -
                      (lambda + 1.0) / N) /
                     (1.0 - 1.0 / N);
    return 0.5 * t * t;
}

/// n(n-1) / (4(N-1)^2) for hyp(N,K,n) against bin(n, K/N), 0 < K < N.
inline double binomial_lower(int64_t N, int64_t n) {
    if (N < 2 || n < 0 || n > N) throw InvalidParams("binomial_lower");
    return static_cast<double>(n) * static_cast<double>(n - 1) /
           (4.0 * static_cast<double>(N - 1) * static_cast<double>(N - 1));
}

struct KravchukLower {
    double bound = 0.0;        ///< (E[K~_2])^2 / 2
    double expectation = 0.0;  ///< E_P[K~_2]
    bool np_is_integer = false;
    bool expectation_in_range = false;  ///< E in [-2^{-1/2}, 0]
    bool applicable() const { return np_is_integer && expectation_in_range; }
};

/// Order-2 Kravchuk moment bound for a distribution table against bin(n,p).
/// Hypothesis failures are flagged, not thrown: the conjecture machinery
/// deliberately probes outside them.
inline KravchukLower kravchuk_lower(const PmfTable& P, const KravchukContext& ctx) {
    ctx.validate();
    if (ctx.n < 2) throw InvalidOrder("kravchuk_lower: need n >= 2");
    std::vector<long double> terms;
    terms.reserve(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P.log_mass[i] == kNegInf) continue;
        long double w = std::exp(static_cast<long double>(P.log_mass[i]));
        terms.push_back(
            w * static_cast<long double>(
                    kravchuk2_normalized(ctx, static_cast<double>(P.scalar(i)))));
    }
    KravchukLower out;
    out.expectation = static_cast<double>(stable_sum(std::move(terms)));
    out.bound = 0.5 * out.expectation * out.expectation;
    const double np = static_cast<double>(ctx.n) * ctx.p;
    out.np_is_integer = std::fabs(np - std::round(np)) < 1e-9;
    out.expectation_in_range =
        out.expectation <= 1e-12 && out.expectation >= -1.0 / std::sqrt(2.0) - 1e-12;
    return out;
}

inline double multi_lower_quadratic(int64_t C, int64_t N, int64_t n) {
    if (C < 1 || N < 1 || n < 0 || n > N) throw InvalidParams("multi_lower_quadratic");
    if (C == 1 || n <= 1) return 0.0;
    return static_cast<double>(C - 1) * binomial_lower(N, n);
}

inline double multi_lower_log(int64_t C, int64_t N, int64_t n) {
    if (C < 1 || N < 2 || n < 1 || n > N) throw InvalidParams("multi_lower_log");
    const double Nd = static_cast<double>(N);
    return static_cast<double>(C - 1) *
           (std::log(Nd / static_cast<double>(N - n + 1)) -
            static_cast<double>(n - 1) / (Nd - 1.0)) /
           2.0;
}

/// (C-1)(r - 1 - ln r)/2 with r = 1 - (n-1)/(N-1/2); hypothesis n <= N/2.
inline double multi_lower_opt(int64_t C, int64_t N, int64_t n) {
    if (C < 1 || N < 1 || n < 1 || n > N) throw InvalidParams("multi_lower_opt");
    if (2 * n > N) throw PreconditionNotMet("multi_lower_opt: needs n <= N/2");
    const double r = 1.0 - static_cast<double>(n - 1) / (static_cast<double>(N) - 0.5);
    return static_cast<double>(C - 1) * (r - 1.0 - std::log(r)) / 2.0;
}

inline double multi_upper_log(int64_t C, int64_t N, int64_t n) {
    if (C < 1 || N < 1 || n < 1 || n > N) throw InvalidParams("multi_upper_log");
    if (n >= N) throw PreconditionNotMet("multi_upper_log: needs n < N");
    const double Nd = static_cast<double>(N);
    return static_cast<double>(C - 1) *
           (std::log((Nd - 1.0) / static_cast<double>(N - n)) +
            1.0 / static_cast<double>(N - n + 1) - static_cast<double>(n) / Nd);
}

struct StepBounds {
    double lower = 0.0;  ///< (C-1)/2 * sum_{j<n} (n-j)/(N-j)^2
    double upper = 0.0;  ///< twice the lower expression
};

inline StepBounds summed_step_bounds(int64_t C, int64_t N, int64_t n) {
    if (C < 1 || N < 1 || n < 1 || n > N) throw InvalidParams("summed_step_bounds");
    std::vector<long double> t;
    for (int64_t j = 1; j <= n - 1; ++j) {
        long double d = static_cast<long double>(N - j);
        t.push_back(static_cast<long double>(n - j) / (d * d));
    }
    double s = static_cast<double>(stable_sum(std::move(t)));
    return StepBounds{static_cast<double>(C - 1) / 2.0 * s, static_cast<double>(C - 1) * s};
}

// ---------------------------------------------------------------------------
// Large-N limits of the bounds as functions of q = n/N (the figure-2 curves)
// ---------------------------------------------------------------------------

inline double stam_lower_limit(int64_t C, double q) {
    if (C < 1 || !(q > 0.0 && q < 1.0)) throw InvalidParams("stam_lower_limit");
    return static_cast<double>(C - 1) * q * q / 4.0;
}

inline double stam_upper_limit(int64_t C, double q) {
    if (C < 1 || !(q > 0.0 && q < 1.0)) throw InvalidParams("stam_upper_limit");
    return static_cast<double>(C - 1) * q * q / (2.0 * (1.0 - q));
}

/// Limit of the integral lower bounds: (C-1)(r - 1 - ln r)/2 with r = 1 - q.
inline double lower_bound_limit(int64_t C, double q) {
    if (C < 1 || !(q > 0.0 && q < 1.0)) throw InvalidParams("lower_bound_limit");
    const double r = 1.0 - q;
    return static_cast<double>(C - 1) * (r - 1.0 - std::log(r)) / 2.0;
}

/// Limit of the summed/log upper bounds: (C-1)(-ln(1-q) - q).
inline double upper_bound_limit(int64_t C, double q) {
    if (C < 1 || !(q > 0.0 && q < 1.0)) throw InvalidParams("upper_bound_limit");
    return static_cast<double>(C - 1) * (-std::log(1.0 - q) - q);
}

// ---------------------------------------------------------------------------
// Assembled report
// ---------------------------------------------------------------------------

enum class Target { Bin, Poisson, Multinomial };

inline const char* to_string(Target t) {
    switch (t) {
        case Target::Bin: return "bin";
        case Target::Poisson: return "poisson";
        default: return "multinomial";
    }
}

struct BoundEntry {
    double value = 0.0;
    double slack = 0.0;  ///< exact - value for lower bounds, value - exact for upper
};

/// Exact divergence with every applicable bound and its slack.
/// Inapplicable bounds are absent from the maps; `flags` carries degeneracy
/// notes (for example K = 0 under the Poisson target).
struct BoundsReport {
    Target target = Target::Bin;
    double exact = 0.0;
    std::map<std::string, BoundEntry> lower;
    std::map<std::string, BoundEntry> upper;
    std::vector<std::string> flags;

    double worst_slack() const {
        double w = std::numeric_limits<double>::infinity();
        for (const auto& [k, e] : lower) w = std::min(w, e.slack);
        for (const auto& [k, e] : upper) w = std::min(w, e.slack);
        return w;
    }
    bool sandwich_ok(double tol = 1e-10) const { return worst_slack() >= -tol; }
};

namespace detail {

inline void add_lower(BoundsReport& r, const std::string& name, double v) {
    r.lower[name] = BoundEntry{v, r.exact - v};
}
inline void add_upper(BoundsReport& r, const std::string& name, double v) {
    r.upper[name] = BoundEntry{v, v - r.exact};
}

// chi^2(hyp, target) over the hypergeometric support: sum p^2/q - 1.
template <class LogQ>
inline double chi2_against(const HypParams& par, LogQ&& logq) {
    std::vector<long double> terms;
    for (int64_t x = par.support_min(); x <= par.support_max(); ++x) {
        long double lp = log_pmf_hyp(par, x);
        terms.push_back(std::exp(2.0L * lp - static_cast<long double>(logq(x))));
    }
    return static_cast<double>(stable_sum(std::move(terms)) - 1.0L);
}

}  // namespace detail

inline BoundsReport bounds_report(const MultiHypParams& par, std::uint64_t cap);

inline BoundsReport bounds_report(const HypParams& par, Target target,
                                  std::uint64_t cap = support_cap()) {
    par.validate();
    if (target == Target::Multinomial) {
        MultiHypParams mpar{par.N, {par.K, par.N - par.K}, par.n};
        return bounds_report(mpar, cap);
    }

    BoundsReport r;
    r.target = target;
    const bool interior = par.K >= 1 && par.K <= par.N - 1;

    if (target == Target::Poisson) {
        r.exact = d_hyp_poisson(par).nats;
        if (par.N >= 2) detail::add_lower(r, "poisson", poisson_lower(par));
        if (par.K == 0 || par.n == 0)
            r.flags.push_back("degenerate: lambda=0, lower bound outside hypotheses");
        if (par.K == par.N) r.flags.push_back("degenerate: K=N (variance condition trivial)");
        const double lambda = static_cast<double>(par.n) * par.p();
        if (lambda > 0.0)
            detail::add_upper(r, "chi2", detail::chi2_against(par, [&](int64_t x) {
                                  return log_pmf_poisson(lambda, x);
                              }));
        return r;
    }

    if (par.n == 0) {  // empty sample: both sides are the point mass at zero
        r.flags.push_back("degenerate: n=0");
        detail::add_lower(r, "quadratic", 0.0);
        detail::add_upper(r, "chi2", 0.0);
        return r;
    }

    r.exact = d_hyp_bin(par).nats;
    const int64_t C = interior ? 2 : 1;  // one empty color class means bin == hyp
    if (!interior) r.flags.push_back("degenerate: single effective color");

    detail::add_lower(r, "quadratic", multi_lower_quadratic(C, par.N, par.n));
    detail::add_lower(r, "log_integral", C == 1 ? 0.0 : multi_lower_log(C, par.N, par.n));
    if (2 * par.n <= par.N)
        detail::add_lower(r, "opt_integral", C == 1 ? 0.0 : multi_lower_opt(C, par.N, par.n));
    if (interior && par.N >= 3) {
        std::vector<double> p{par.p(), 1.0 - par.p()};
        detail::add_lower(r, "stam_lower", stam_lower(C, par.N, par.n, q_constant(p)));
    }
    if (interior && par.n >= 2) {
        KravchukContext ctx{par.n, par.p()};
        KravchukLower kv = kravchuk_lower(enumerate_support(par), ctx);
        if (kv.applicable())
            detail::add_lower(r, "kravchuk", kv.bound);
        else
            r.flags.push_back("kravchuk bound outside hypotheses (np integer / moment range)");
    }

    detail::add_upper(r, "stam_upper", stam_upper(C, par.N, par.n));
    if (interior) {
        const double p = par.p();
        detail::add_upper(r, "chi2", detail::chi2_against(par, [&](int64_t x) {
                              return log_pmf_bin(par.n, p, x);
                          }));
    } else {
        detail::add_upper(r, "chi2", 0.0);  // identical point distributions
    }
    if (par.n < par.N && C > 1)
        detail::add_upper(r, "log_upper", multi_upper_log(C, par.N, par.n));
    detail::add_upper(r, "summed_upper", summed_step_bounds(C, par.N, par.n).upper);
    return r;
}

inline BoundsReport bounds_report(const MultiHypParams& par, std::uint64_t cap) {
    par.validate();
    BoundsReport r;
    r.target = Target::Multinomial;
    if (par.n == 0) {
        r.flags.push_back("degenerate: n=0");
        detail::add_lower(r, "quadratic", 0.0);
        detail::add_upper(r, "chi2", 0.0);
        return r;
    }
    r.exact = d_multihyp_multinomial(par, cap).nats;

    std::vector<double> peff;
    for (int64_t kc : par.k)
        if (kc >= 1) peff.push_back(static_cast<double>(kc) / static_cast<double>(par.N));
    const int64_t C = static_cast<int64_t>(peff.size());
    if (C != static_cast<int64_t>(par.colors()))
        r.flags.push_back("empty color classes dropped: effective C = " + std::to_string(C));

    detail::add_lower(r, "quadratic", multi_lower_quadratic(C, par.N, par.n));
    detail::add_lower(r, "log_integral", C == 1 ? 0.0 : multi_lower_log(C, par.N, par.n));
    if (2 * par.n <= par.N)
        detail::add_lower(r, "opt_integral", C == 1 ? 0.0 : multi_lower_opt(C, par.N, par.n));
    if (par.N >= 3 && C >= 2)
        detail::add_lower(r, "stam_lower", stam_lower(C, par.N, par.n, q_constant(peff)));

    detail::add_upper(r, "stam_upper", stam_upper(C, par.N, par.n));
    {
        PmfTable P = enumerate_support(par, cap);
        auto probs = par.probabilities();
        std::vector<long double> terms;
        for (std::size_t i = 0; i < P.size(); ++i) {
            long double lp = P.log_mass[i];
            if (lp == kNegInf) continue;
            long double lq = log_pmf_multinomial(par.n, probs, P.support[i]);
            terms.push_back(std::exp(2.0L * lp - lq));
        }
        detail::add_upper(r, "chi2", static_cast<double>(stable_sum(std::move(terms)) - 1.0L));
    }
    if (par.n < par.N && C > 1)
        detail::add_upper(r, "log_upper", multi_upper_log(C, par.N, par.n));
    detail::add_upper(r, "summed_upper", summed_step_bounds(C, par.N, par.n).upper);
    return r;
}

inline BoundsReport bounds_report(const MultiHypParams& par) {
    return bounds_report(par, support_cap());
}

}  // namespace hypergeo
