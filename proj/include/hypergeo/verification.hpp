#pragma once

// Machine verification of finite-case claims: the exponentially tilted
// family along the normalized order-2 Kravchuk polynomial, the per-case
// moment-bound sweeps, the conjecture probe outside the integer-mean
// hypothesis, and the asymptotic experiments.

#include <cstdio>
#include <random>

#include "hypergeo/bounds.hpp"

namespace hypergeo {

/// Q_beta(x) = exp(beta * K~_2(x;n)) bin(n,p,x), a positive measure.
/// At beta = 0 the normalization of K~_2 gives M = 1, M' = 0, M'' = 1.
struct TiltedFamily {
    KravchukContext ctx;
    double beta = 0.0;
};

struct TiltedMoments {
    double M = 0.0;   ///< sum exp(beta y) b
    double M1 = 0.0;  ///< sum y exp(beta y) b
    double M2 = 0.0;  ///< sum y^2 exp(beta y) b
    double M3 = 0.0;  ///< sum y^3 exp(beta y) b
};

inline TiltedMoments tilted_moments(const TiltedFamily& fam) {
    fam.ctx.validate();
    if (fam.ctx.n < 2) throw InvalidOrder("tilted_moments: need n >= 2");
    std::vector<long double> t0, t1, t2, t3;
    for (int64_t x = 0; x <= fam.ctx.n; ++x) {
        long double y = kravchuk2_normalized(fam.ctx, static_cast<double>(x));
        long double w = std::exp(static_cast<long double>(log_pmf_bin(fam.ctx.n, fam.ctx.p, x)) +
                                 static_cast<long double>(fam.beta) * y);
        t0.push_back(w);
        t1.push_back(w * y);
        t2.push_back(w * y * y);
        t3.push_back(w * y * y * y);
    }
    TiltedMoments m;
    m.M = static_cast<double>(stable_sum(std::move(t0)));
    m.M1 = static_cast<double>(stable_sum(std::move(t1)));
    m.M2 = static_cast<double>(stable_sum(std::move(t2)));
    m.M3 = static_cast<double>(stable_sum(std::move(t3)));
    return m;
}

/// Per-case result of the moment-bound sweep.
///
/// The sweep drives beta from 0 downward and checks, for the tilted family
/// member with mean mu = M'/M, the projected inequality
///     beta*mu - ln M(beta) >= mu^2 / 2,
/// which dominates D(P||bin) for every P with E_P[K~_2] = mu. The raw
/// positive-measure variant beta*M' - (M-1) - M'^2/2 is recorded alongside;
/// it is strictly weaker and actually dips negative at n=2, p=1/2.
struct CaseReport {
    int64_t n = 0;
    int64_t k = 0;  ///< np (integer for the theorem cases)
    bool passed = false;
    double min_slack = 0.0;            ///< worst projected slack over the sweep
    double worst_beta = 0.0;
    double worst_mu = 0.0;
    double min_slack_unnormalized = 0.0;
    double m2_at_beta0 = 0.0;          ///< M''(-2/e)
    bool analytic_branch = false;      ///< min K~_2 >= -2/e, no sweep needed
    bool third_moment_zero = false;    ///< E[K~_2^3] = 0 (only n=2, p=1/2)
    int64_t steps = 0;
};

struct SweepOptions {
    double step = 1e-3;
    double margin = 0.05;       ///< sweep past -2^{-1/2} by this much when reachable
    double tolerance = 1e-10;
    double beta_floor = -40.0;  ///< hard stop when the margin is unreachable
};

namespace detail {

inline CaseReport sweep_case(int64_t n, double p, int64_t k, const SweepOptions& opt) {
    KravchukContext ctx{n, p};
    ctx.validate();
    if (n < 2) throw InvalidCase("sweep needs n >= 2");

    std::vector<long double> ys, ws;
    long double ymin = std::numeric_limits<long double>::infinity();
    for (int64_t x = 0; x <= n; ++x) {
        long double y = kravchuk2_normalized(ctx, static_cast<double>(x));
        ys.push_back(y);
        ws.push_back(std::exp(static_cast<long double>(log_pmf_bin(n, p, x))));
        ymin = std::min(ymin, y);
    }
    const long double beta0 = -2.0L / std::exp(1.0L);
    const long double stop = -1.0L / std::sqrt(2.0L) - static_cast<long double>(opt.margin);

    CaseReport rep;
    rep.n = n;
    rep.k = k;
    rep.analytic_branch = ymin >= beta0 - 1e-12L;
    rep.third_moment_zero =
        std::fabs(kravchuk2_third_moment(ctx)) < 1e-12;
    {
        long double m2 = 0.0L;
        for (std::size_t i = 0; i < ys.size(); ++i)
            m2 += ws[i] * ys[i] * ys[i] * std::exp(beta0 * ys[i]);
        rep.m2_at_beta0 = static_cast<double>(m2);
    }

    long double beta = 0.0L;
    long double worst = std::numeric_limits<long double>::infinity();
    long double worst_un = std::numeric_limits<long double>::infinity();
    while (beta >= static_cast<long double>(opt.beta_floor)) {
        long double M = 0.0L, M1 = 0.0L;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            long double e = ws[i] * std::exp(beta * ys[i]);
            M += e;
            M1 += e * ys[i];
        }
        const long double mu = M1 / M;
        const long double g = beta * mu - std::log(M) - mu * mu / 2.0L;
        if (g < worst) {
            worst = g;
            rep.worst_beta = static_cast<double>(beta);
            rep.worst_mu = static_cast<double>(mu);
        }
        worst_un = std::min(worst_un, beta * M1 - (M - 1.0L) - M1 * M1 / 2.0L);
        ++rep.steps;
        if (mu < stop) break;
        beta -= static_cast<long double>(opt.step);
    }
    rep.min_slack = static_cast<double>(worst);
    rep.min_slack_unnormalized = static_cast<double>(worst_un);
    rep.passed = rep.min_slack >= -opt.tolerance;
    return rep;
}

}  // namespace detail

/// Sweep one integer-mean case (p = k/n).
inline CaseReport verify_thm33_case(int64_t n, int64_t k, const SweepOptions& opt = {}) {
    if (n < 2 || k < 1 || k > n - 1) throw InvalidCase("verify_thm33_case: need 2<=n, 0<k<n");
    return detail::sweep_case(n, static_cast<double>(k) / static_cast<double>(n), k, opt);
}

struct Thm33Summary {
    std::vector<CaseReport> cases;       ///< nondegenerate cases, ordered by (n,k)
    int64_t total = 0;                   ///< swept cases: sum_{n=2..nmax} (n-1)
    int64_t passed = 0;
    int64_t third_moment_positive = 0;   ///< cases with strictly positive E[K~_2^3]
    int64_t degenerate_endpoints = 0;    ///< k in {0, n}, flagged and not swept
    bool all_passed = false;
};

/// Sweeps every (n, k) with 2 <= n <= n_max, 1 <= k <= n-1.
inline Thm33Summary verify_thm33_all(int64_t n_max = 13, const SweepOptions& opt = {}) {
    Thm33Summary s;
    for (int64_t n = 2; n <= n_max; ++n) {
        for (int64_t k = 1; k <= n - 1; ++k) {
            CaseReport r = verify_thm33_case(n, k, opt);
            s.cases.push_back(r);
            ++s.total;
            if (r.passed) ++s.passed;
            if (!r.third_moment_zero) ++s.third_moment_positive;
        }
        s.degenerate_endpoints += 2;  // k = 0 and k = n carry no tilt direction
    }
    s.all_passed = s.passed == s.total;
    return s;
}

struct ConjectureViolation {
    int64_t n = 0;
    double p = 0.0;
    double beta = 0.0;
    double slack = 0.0;
};

/// Runs the sweep over non-integer np points. Returns every grid point whose
/// projected slack dips below -tolerance; the conjecture expects none.
inline std::vector<ConjectureViolation> conjecture_search(int64_t n_min, int64_t n_max,
                                                          int points_per_n,
                                                          double tolerance = 1e-9,
                                                          std::uint64_t seed = 0,
                                                          const SweepOptions& opt = {}) {
    if (n_min < 2 || n_max < n_min || points_per_n < 0)
        throw InvalidParams("conjecture_search: bad grid");
    std::vector<ConjectureViolation> out;
    std::mt19937_64 rng(seed);
    for (int64_t n = n_min; n <= n_max; ++n) {
        for (int i = 0; i < points_per_n; ++i) {
            double p = 0.05 + 0.9 * (i + 0.5) / points_per_n;
            if (seed != 0) {
                std::uniform_real_distribution<double> jit(-0.4, 0.4);
                p += jit(rng) * 0.9 / points_per_n;
            }
            const double np = static_cast<double>(n) * p;
            if (std::fabs(np - std::round(np)) < 1e-6) continue;  // integer-mean filter
            CaseReport r = detail::sweep_case(n, p, static_cast<int64_t>(std::llround(np)), opt);
            if (r.min_slack < -tolerance)
                out.push_back({n, p, r.worst_beta, r.min_slack});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

struct AsymptoteTrace {
    std::vector<int64_t> N;  ///< population schedule
    std::vector<int64_t> n;  ///< sample schedule, n = round((1-r) N)
    std::vector<double> value;
    std::vector<double> error;
    double limit = 0.0;      ///< (C-1)(r - 1 - ln r)/2
};

/// Rounds weights to integer color counts summing to N (largest remainder).
inline std::vector<int64_t> round_colors(std::span<const double> weights, int64_t N) {
    double wsum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw InvalidParams("round_colors: weights must be positive");
        wsum += w;
    }
    std::vector<int64_t> k(weights.size());
    std::vector<std::pair<double, std::size_t>> rem;
    int64_t assigned = 0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
        double ideal = static_cast<double>(N) * weights[c] / wsum;
        k[c] = static_cast<int64_t>(std::floor(ideal));
        assigned += k[c];
        rem.push_back({ideal - std::floor(ideal), c});
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int64_t i = 0; i < N - assigned; ++i) k[rem[static_cast<std::size_t>(i)].second] += 1;
    for (int64_t kc : k)
        if (kc < 1) throw InvalidParams("round_colors: a color class rounded to zero");
    return k;
}

/// Exact divergences along an increasing-N schedule with 1 - n/N -> r.
inline AsymptoteTrace asymptote_experiment(std::span<const double> weights, double r,
                                           int steps, int64_t N_max, int64_t N_min = 100,
                                           std::uint64_t cap = support_cap()) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidParams("asymptote_experiment: r in (0,1)");
    if (steps < 2 || N_min < 2 || N_max <= N_min)
        throw InvalidParams("asymptote_experiment: bad schedule");
    const std::size_t C = weights.size();
    AsymptoteTrace tr;
    tr.limit = static_cast<double>(C - 1) * (r - 1.0 - std::log(r)) / 2.0;
    std::vector<int64_t> sched;
    for (int i = 0; i < steps; ++i) {
        double t = static_cast<double>(i) / (steps - 1);
        int64_t N = static_cast<int64_t>(
            std::llround(N_min * std::pow(static_cast<double>(N_max) / N_min, t)));
        // snap N a little so that (1-r)N is near an integer; otherwise the
        // rounding of n jitters the effective ratio by O(1/N) and masks the
        // convergence of the trace
        int64_t best = N;
        double best_dev = std::numeric_limits<double>::infinity();
        for (int64_t cand = std::max<int64_t>(2, N - 4); cand <= std::min(N_max, N + 4);
             ++cand) {
            double ideal = (1.0 - r) * static_cast<double>(cand);
            double dev = std::fabs(ideal - std::round(ideal)) / static_cast<double>(cand);
            if (dev < best_dev) {
                best_dev = dev;
                best = cand;
            }
        }
        if (sched.empty() || best > sched.back()) sched.push_back(best);
    }
    for (int64_t N : sched) {
        std::vector<int64_t> k = round_colors(weights, N);
        int64_t n = std::clamp<int64_t>(std::llround((1.0 - r) * static_cast<double>(N)), 1, N);
        double D;
        if (C == 1) {
            D = 0.0;
        } else if (C == 2) {
            D = d_hyp_bin(HypParams{N, k[0], n}).nats;  // two colors reduce to univariate
        } else {
            D = d_multihyp_multinomial(MultiHypParams{N, k, n}, cap).nats;
        }
        tr.N.push_back(N);
        tr.n.push_back(n);
        tr.value.push_back(D);
        tr.error.push_back(std::fabs(D - tr.limit));
    }
    return tr;
}

struct ExtremePoint {
    int64_t N = 0;
    double D = 0.0;    ///< D(U_2 || V_2) at K = 1
    double N2D = 0.0;  ///< N^2 D, tends to 1
};

/// The K=1, n=2 family where the distribution-independent upper bounds are
/// nearly attained; N^2 D -> 1.
inline std::vector<ExtremePoint> extreme_case_trace(int64_t N_min, int64_t N_max,
                                                    int64_t stride = 1) {
    if (N_min < 2 || N_max < N_min || stride < 1) throw InvalidParams("extreme_case_trace");
    std::vector<ExtremePoint> out;
    for (int64_t N = N_min; N <= N_max; N += stride) {
        double D = d_hyp_bin(HypParams{N, 1, 2}).nats;
        out.push_back({N, D, static_cast<double>(N) * static_cast<double>(N) * D});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Moment identities behind the asymptotic proof
// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    double closed = 0.0;
    double brute = 0.0;
    double rel_err = 0.0;
    bool pass = false;
};

struct MomentIdentityReport {
    std::vector<CheckRow> rows;
    bool all_pass = true;
};

namespace detail {

inline void push_check(MomentIdentityReport& rep, std::string name, double closed,
                       double brute, double tol) {
    CheckRow row;
    row.name = std::move(name);
    row.closed = closed;
    row.brute = brute;
    row.rel_err = std::fabs(closed - brute) / std::max(1.0, std::fabs(brute));
    row.pass = row.rel_err <= tol;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(std::move(row));
}

}  // namespace detail

/// Central-moment closed forms (orders 2..4) and the per-order terms of the
/// asymptotic expansion against brute-force enumeration.
inline MomentIdentityReport verify_moment_identities(double tol = 1e-8) {
    MomentIdentityReport rep;
    const std::vector<int64_t> Ns{6, 10, 14, 20, 30, 40};
    const std::vector<double> ratios{0.1, 0.3, 0.5};
    for (int64_t N : Ns) {
        for (double rho : ratios) {
            int64_t K = std::max<int64_t>(1, std::llround(rho * static_cast<double>(N)));
            for (int64_t m : {int64_t{1}, N / 4, N / 2, 3 * N / 4, N - 1}) {
                if (m < 1 || m >= N) continue;
                HypParams par{N, K, m};
                PmfTable tab = enumerate_support(par);
                MomentSet cf = moments_closed_form(par);
                const double p = par.p();
                const double Nd = static_cast<double>(N);
                const double md = static_cast<double>(m);
                char buf[96];

                std::snprintf(buf, sizeof buf, "mu2[N=%lld,K=%lld,m=%lld]",
                              static_cast<long long>(N), static_cast<long long>(K),
                              static_cast<long long>(m));
                detail::push_check(rep, buf, cf.central.at(2), moments_by_enumeration(tab, 2),
                                   tol);
                std::snprintf(buf, sizeof buf, "mu3[N=%lld,K=%lld,m=%lld]",
                              static_cast<long long>(N), static_cast<long long>(K),
                              static_cast<long long>(m));
                detail::push_check(rep, buf, cf.central.at(3), moments_by_enumeration(tab, 3),
                                   tol);
                std::snprintf(buf, sizeof buf, "mu4[N=%lld,K=%lld,m=%lld]",
                              static_cast<long long>(N), static_cast<long long>(K),
                              static_cast<long long>(m));
                detail::push_check(rep, buf, cf.central.at(4), moments_by_enumeration(tab, 4),
                                   tol);

                // Second-order expansion term: mu2/(2p(N-m)^2) = m(1-p)/(2(N-m)(N-1)).
                std::snprintf(buf, sizeof buf, "term2[N=%lld,K=%lld,m=%lld]",
                              static_cast<long long>(N), static_cast<long long>(K),
                              static_cast<long long>(m));
                detail::push_check(
                    rep, buf, md * (1.0 - p) / (2.0 * (Nd - md) * (Nd - 1.0)),
                    moments_by_enumeration(tab, 2) /
                        (2.0 * p * (Nd - md) * (Nd - md)),
                    tol);

                // Third-order term: mu3/(6p^2(N-m)^3).
                std::snprintf(buf, sizeof buf, "term3[N=%lld,K=%lld,m=%lld]",
                              static_cast<long long>(N), static_cast<long long>(K),
                              static_cast<long long>(m));
                detail::push_check(
                    rep, buf,
                    (1.0 - p) * (1.0 - 2.0 * p) / (6.0 * p) * md * (Nd - 2.0 * md) /
                        ((Nd - md) * (Nd - md) * (Nd - 1.0) * (Nd - 2.0)),
                    moments_by_enumeration(tab, 3) /
                        (6.0 * p * p * (Nd - md) * (Nd - md) * (Nd - md)),
                    tol);
            }
        }
    }
    // Color-summed second order term: m(C-1)/(2(N-m)(N-1)) for a concrete split.
    {
        const int64_t N = 20, m = 5;
        const std::vector<int64_t> ks{4, 6, 10};
        double summed = 0.0;
        for (int64_t kc : ks) {
            HypParams par{N, kc, m};
            PmfTable tab = enumerate_support(par);
            summed += moments_by_enumeration(tab, 2) /
                      (2.0 * par.p() * static_cast<double>(N - m) * static_cast<double>(N - m));
        }
        const double C = static_cast<double>(ks.size());
        detail::push_check(rep, "term2-color-sum[N=20,m=5,k=(4,6,10)]",
                           static_cast<double>(m) * (C - 1.0) /
                               (2.0 * static_cast<double>(N - m) * static_cast<double>(N - 1)),
                           summed, tol);
    }
    return rep;
}

}  // namespace hypergeo
