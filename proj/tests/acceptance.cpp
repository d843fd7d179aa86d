// Acceptance suite: one line per criterion, exit 0 iff every criterion that
// ran passed.
//
// Criterion 3 checks the per-step mutual-information bracket exactly as
// claimed. Its lower half has exact counterexamples (steps where a color
// class can be exhausted), so that criterion reports FAIL by design, with
// the counterexamples printed; the ctest registration marks it as an
// expected failure. The restricted bracket (j <= min k_c) is asserted in
// the unit suite.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "hypergeo/hypergeo.hpp"

namespace hg = hypergeo;
using hg::int64_t;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double now_s() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::vector<std::vector<int64_t>> color_grid(int64_t N, int C) {
    std::vector<std::vector<int64_t>> out;
    if (C == 2) {
        std::vector<int64_t> ks;
        for (int q = 1; q <= 9; ++q) {
            int64_t k = std::clamp<int64_t>(std::llround(q * 0.1 * N), 1, N - 1);
            if (ks.empty() || k != ks.back()) ks.push_back(k);
        }
        for (int64_t k : ks) out.push_back({k, N - k});
    } else {
        const double ratios[][3] = {{1, 1, 1},      {1, 1, 8},  {1, 4.5, 4.5},
                                    {2, 3, 5},      {1, 2, 7},  {2.5, 2.5, 5}};
        for (const auto& r : ratios) {
            double s = r[0] + r[1] + r[2];
            std::vector<int64_t> k(3);
            int64_t tot = 0;
            for (int c = 0; c < 3; ++c) {
                k[c] = std::max<int64_t>(1, std::llround(r[c] / s * N));
                tot += k[c];
            }
            k[2] += N - tot;
            if (k[2] < 1) continue;
            std::sort(k.begin(), k.end());
            if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
        }
    }
    return out;
}

// --- criterion 1: sandwich ------------------------------------------------

Outcome criterion1() {
    Outcome o;
    double worst = std::numeric_limits<double>::infinity();
    std::string worst_at;
    long combos = 0;
    for (int64_t N = 2; N <= 60; ++N) {
        for (int C : {2, 3}) {
            if (C > N) continue;
            for (const auto& ks : color_grid(N, C)) {
                if (C == 2) {
                    for (int64_t n = 1; n <= N; ++n) {
                        hg::BoundsReport r =
                            hg::bounds_report(hg::HypParams{N, ks[0], n}, hg::Target::Bin);
                        ++combos;
                        if (r.worst_slack() < worst) {
                            worst = r.worst_slack();
                            worst_at = "N=" + std::to_string(N) + " K=" + std::to_string(ks[0]) +
                                       " n=" + std::to_string(n);
                        }
                    }
                } else {
                    hg::MultiHypParams par{N, ks, 1};
                    for (int64_t n = 1; n <= N; ++n) {
                        par.n = n;
                        hg::BoundsReport r = hg::bounds_report(par);
                        ++combos;
                        if (r.worst_slack() < worst) {
                            worst = r.worst_slack();
                            worst_at = "N=" + std::to_string(N) + " C=3 n=" + std::to_string(n);
                        }
                    }
                }
            }
        }
    }
    o.pass = worst >= -1e-10;
    o.detail = std::to_string(combos) + " instances on the ratio color grid, worst slack " +
               hg::format_double(worst) + " at " + worst_at;
    return o;
}

// --- criterion 2/3: chain decomposition grid -------------------------------

struct ChainGridResult {
    Outcome identity;
    Outcome bracket;      // as stated, expected to fail
    long bracket_viol = 0;
    long bracket_viol_exhaustion = 0;
    std::string first_viol;
};

ChainGridResult chain_grid() {
    ChainGridResult res;
    double worst_rel = 0.0;
    double bracket_worst = 0.0;
    long identities = 0, brackets = 0;
    for (int64_t N = 2; N <= 20; ++N) {
        std::vector<std::vector<int64_t>> splits;
        for (int64_t K = 1; K <= N - 1; ++K) splits.push_back({K, N - K});
        for (const auto& ks : color_grid(N, 3))
            if (N >= 3) splits.push_back(ks);
        for (const auto& ks : splits) {
            const int64_t C = static_cast<int64_t>(ks.size());
            int64_t kmin = *std::min_element(ks.begin(), ks.end());
            hg::MultiHypParams par{N, ks, N};
            hg::ChainDecomposition cd = hg::chain_decompose(par);
            // identity for every n <= N using the shared I_j terms;
            // tolerance 1e-9 relative with a 1e-12 absolute floor
            for (int64_t n = 1; n <= N; ++n) {
                par.n = n;
                double direct = hg::d_multihyp_multinomial(par).nats;
                std::vector<long double> t;
                for (int64_t j = 1; j <= n - 1; ++j)
                    t.push_back(static_cast<long double>(n - j) *
                                static_cast<long double>(cd.terms[static_cast<std::size_t>(j - 1)]));
                double weighted = static_cast<double>(hg::stable_sum(std::move(t)));
                double err = std::fabs(weighted - direct) / std::max(std::fabs(direct), 1e-3);
                worst_rel = std::max(worst_rel, err);
                ++identities;
            }
            par.n = N;
            for (int64_t j = 1; j <= N - 1; ++j) {
                double I = cd.terms[static_cast<std::size_t>(j - 1)];
                double lo = static_cast<double>(C - 1) / (2.0 * (N - j) * (N - j));
                double up = static_cast<double>(C - 1) / (1.0 * (N - j) * (N - j));
                ++brackets;
                double slack = std::min(I - lo, up - I);
                bracket_worst = std::min(bracket_worst, slack);
                if (slack < -1e-12) {
                    ++res.bracket_viol;
                    if (j > kmin) ++res.bracket_viol_exhaustion;
                    if (res.first_viol.empty()) {
                        std::string kdesc;
                        for (int64_t kc : ks)
                            kdesc += (kdesc.empty() ? "" : ",") + std::to_string(kc);
                        char buf[160];
                        std::snprintf(buf, sizeof buf, "N=%lld k=(%s) j=%lld: I_j=%.6f lower=%.6f",
                                      static_cast<long long>(N), kdesc.c_str(),
                                      static_cast<long long>(j), I, lo);
                        res.first_viol = buf;
                    }
                }
            }
        }
    }
    res.identity.pass = worst_rel <= 1e-9;
    res.identity.detail = std::to_string(identities) +
                          " identities, worst |chain - direct| relative error " +
                          hg::format_double(worst_rel);
    res.bracket.pass = res.bracket_viol == 0;
    res.bracket.detail =
        std::to_string(brackets) + " steps checked, " + std::to_string(res.bracket_viol) +
        " lower-bound violations (" + std::to_string(res.bracket_viol_exhaustion) +
        " at exhaustion-capable steps j > min k_c, i.e. all of them); worst slack " +
        hg::format_double(bracket_worst) +
        (res.first_viol.empty() ? "" : ("; first: " + res.first_viol));
    return res;
}

// --- criterion 4: integer-mean finite verification --------------------------

Outcome criterion4() {
    Outcome o;
    hg::SweepOptions opt;
    hg::Thm33Summary s = hg::verify_thm33_all(13, opt);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& c : s.cases) worst = std::min(worst, c.min_slack);
    o.pass = s.all_passed && s.total == 78;
    o.detail = std::to_string(s.passed) + "/" + std::to_string(s.total) +
               " swept cases pass (worst slack " + hg::format_double(worst) +
               "); count bookkeeping: 78 integer-mean cases = 77 with positive third moment " +
               "+ the marginal (n=2,k=1); the quoted 91 counts degenerate means as well";
    return o;
}

// --- criterion 5: third-moment identity -------------------------------------

Outcome criterion5() {
    Outcome o;
    double worst = 0.0;
    double stated_worst = 0.0;
    bool zero_ok = true, sign_ok = true;
    for (int64_t n = 2; n <= 13; ++n) {
        for (int ip = 1; ip <= 9; ++ip) {
            double p = ip / 10.0;
            hg::KravchukContext ctx{n, p};
            std::vector<long double> t;
            for (int64_t x = 0; x <= n; ++x) {
                long double v = 2.0L * (1 - p) * (1 - p) *
                                static_cast<long double>(hg::kravchuk(ctx, 2,
                                                                      static_cast<double>(x)));
                t.push_back(std::exp(static_cast<long double>(hg::log_pmf_bin(n, p, x))) * v *
                            v * v);
            }
            double brute = static_cast<double>(hg::stable_sum(std::move(t)));
            double closed = hg::kravchuk2_third_moment(ctx);
            worst = std::max(worst,
                             std::fabs(closed - brute) / std::max(1.0, std::fabs(brute)));
            // the coefficients as printed in the source display
            double q = 1 - p;
            double stated = n * p * p * q * q *
                            (8.0 * n - 2.0 + p * q * (89.0 * n * n - 293.0 * n + 174.0));
            stated_worst = std::max(
                stated_worst, std::fabs(stated - brute) / std::max(1.0, std::fabs(brute)));
            if (n == 2 && ip == 5) {
                zero_ok = zero_ok && closed == 0.0 && std::fabs(brute) < 1e-12;
            } else {
                sign_ok = sign_ok && closed > 0.0 && brute > 0.0;
            }
        }
    }
    o.pass = worst <= 1e-8 && zero_ok && sign_ok;
    o.detail = "closed form 4n(n-1)p^2q^2(1+2(n-4)pq) vs enumeration: max rel err " +
               hg::format_double(worst) +
               "; zero exactly at (n=2,p=1/2), positive elsewhere: " +
               (zero_ok && sign_ok ? "yes" : "NO") +
               "; the printed coefficients (8n-2, 89n^2-293n+174) deviate from enumeration " +
               "by up to " + hg::format_double(stated_worst) + " relative (transcription error)";
    return o;
}

// --- criterion 6: Poisson lower bound ---------------------------------------

Outcome criterion6() {
    Outcome o;
    double worst = std::numeric_limits<double>::infinity();
    double min_ratio = std::numeric_limits<double>::infinity();
    long checked = 0, viol = 0, viol_edge = 0;
    std::string first;
    for (int64_t N = 2; N <= 60; ++N) {
        for (int64_t K = 1; K <= N; ++K) {
            for (int64_t n = 1; n <= N; ++n) {
                hg::HypParams par{N, K, n};
                double d = hg::d_hyp_poisson(par).nats;
                double b = hg::poisson_lower(par);
                worst = std::min(worst, d - b);
                if (b > 0) min_ratio = std::min(min_ratio, d / b);
                ++checked;
                if (d < b - 1e-12) {
                    ++viol;
                    if (K == 1 || n == 1) ++viol_edge;
                    if (first.empty())
                        first = "hyp(" + std::to_string(N) + "," + std::to_string(K) + "," +
                                std::to_string(n) + "): D=" + hg::format_double(d) +
                                " < bound=" + hg::format_double(b);
                }
            }
        }
    }
    double named = hg::d_hyp_poisson(hg::HypParams{2, 2, 2}).nats;
    bool named_ok = std::fabs(named - 1.3068528194400546) < 1e-12 && named >= 0.5;
    o.pass = worst >= -1e-12 && named_ok;
    o.detail = std::to_string(checked) + " instances (K,n >= 1): " + std::to_string(viol) +
               " violate the claimed bound (" + std::to_string(viol_edge) +
               " of them at K=1 or n=1); first: " + first + "; min D/bound = " +
               hg::format_double(min_ratio) +
               " (> 1/2, i.e. the bound with half the constant held everywhere); " +
               "hyp(2,2,2): exact " + hg::format_double(named) + " >= 0.5 holds";
    return o;
}

// --- criterion 7: phi grid ---------------------------------------------------

Outcome criterion7() {
    Outcome o;
    double worst = std::numeric_limits<double>::infinity();
    const int points = 100000;
    auto probe = [&](double x) {
        hg::PhiEval e = hg::phi_sandwich(x);
        double scale = std::max(1.0, std::fabs(e.phi));
        worst = std::min({worst, e.phi / scale, (e.phi - e.taylor3_lower) / scale,
                          (e.chi_upper - e.phi) / scale, (e.taylor4_upper - e.phi) / scale});
    };
    probe(0.0);
    for (int i = 0; i <= points; ++i) probe(std::pow(10.0, -6.0 + 9.0 * i / points));

    double fd_worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
        double x = 0.1 + (10.0 - 0.1) * i / 21.0;
        for (int order = 1; order <= 5; ++order) {
            double h = 0.01 * x;
            auto f = [&](double t) { return hg::phi_derivative(t, order - 1); };
            double fd = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
                        (12.0 * h);
            double want = hg::phi_derivative(x, order);
            fd_worst = std::max(fd_worst,
                                std::fabs(fd - want) / std::max(1.0, std::fabs(want)));
        }
    }
    o.pass = worst >= -1e-12 && fd_worst <= 1e-6;
    o.detail = "bracket slack >= " + hg::format_double(worst) +
               " over 1e5 log-spaced points; derivative-vs-FD max rel err " +
               hg::format_double(fd_worst);
    return o;
}

// --- criterion 8: asymptotics ------------------------------------------------

Outcome criterion8() {
    Outcome o;
    std::vector<double> w{0.5, 0.5};
    hg::AsymptoteTrace tr = hg::asymptote_experiment(w, 0.5, 24, 2000);
    bool tail_ok = true;
    std::size_t start = tr.error.size() * 2 / 3;
    for (std::size_t i = start + 1; i < tr.error.size(); ++i)
        tail_ok = tail_ok && tr.error[i] <= tr.error[i - 1] + 1e-6;
    o.pass = tr.error.back() < 5e-3 && tail_ok;
    o.detail = "limit " + hg::format_double(tr.limit) + ", final error " +
               hg::format_double(tr.error.back()) + " at N=" + std::to_string(tr.N.back()) +
               ", last-third errors " + (tail_ok ? "decreasing" : "NOT decreasing");
    return o;
}

// --- criterion 9: extreme case ------------------------------------------------

Outcome criterion9() {
    Outcome o;
    bool lower_ok = true;
    int64_t first_bad = -1;
    for (const auto& pt : hg::extreme_case_trace(2, 10000)) {
        if (pt.D < 1.0 / (2.0 * (pt.N - 1.0) * (pt.N - 1.0)) - 1e-15) {
            lower_ok = false;
            if (first_bad < 0) first_bad = pt.N;
        }
    }
    double at100 = hg::extreme_case_trace(100, 100)[0].N2D;
    double at1000 = hg::extreme_case_trace(1000, 1000)[0].N2D;
    o.pass = lower_ok && std::fabs(at100 - 1.0) <= 0.05 && std::fabs(at1000 - 1.0) <= 0.005;
    o.detail = "N^2 D at N=100: " + hg::format_double(at100) + ", at N=1000: " +
               hg::format_double(at1000) + "; D >= 1/(2(N-1)^2) for all N <= 1e4: " +
               (lower_ok ? "yes" : "NO (first N=" + std::to_string(first_bad) + ")");
    return o;
}

// --- criterion 10: figure 1 dataset -------------------------------------------

Outcome criterion10() {
    Outcome o;
    const int64_t N = 200, n = 101;
    std::vector<double> exact(N, 0.0);
    double sym_worst = 0.0, min_over = std::numeric_limits<double>::infinity();
    double max_under = -std::numeric_limits<double>::infinity();
    const double quad = hg::multi_lower_quadratic(2, N, n);
    const double stam = hg::stam_upper(2, N, n);
    long rows = 0;
    for (int64_t K = 1; K <= N - 1; ++K) {
        double d = hg::d_hyp_bin(hg::HypParams{N, K, n}).nats;
        exact[static_cast<std::size_t>(K)] = d;
        min_over = std::min(min_over, d - quad);
        max_under = std::max(max_under, d - stam);
        ++rows;
    }
    for (int64_t K = 1; K <= N - 1; ++K)
        sym_worst = std::max(sym_worst, std::fabs(exact[static_cast<std::size_t>(K)] -
                                                  exact[static_cast<std::size_t>(N - K)]));
    bool quad_val_ok = std::fabs(quad - 0.06376101613595617) < 1e-15;
    bool stam_val_ok = std::fabs(stam - 0.2537688442211055) < 1e-15;
    o.pass = rows == 199 && sym_worst <= 1e-12 && min_over > 0 && max_under < 0 &&
             quad_val_ok && stam_val_ok;
    o.detail = std::to_string(rows) + " rows; max |D(K) - D(N-K)| = " +
               hg::format_double(sym_worst) + "; min(exact - 0.063762) = " +
               hg::format_double(min_over) + "; max(exact - 0.253769) = " +
               hg::format_double(max_under);
    return o;
}

// --- criterion 11: oracle equivalence ------------------------------------------

Outcome criterion11() {
    Outcome o;
    double worst = 0.0;
    std::string worst_at;
    long checked = 0;
    for (int64_t N = 1; N <= 30; ++N) {
        for (int64_t K = 0; K <= N; ++K) {
            for (int64_t n = 1; n <= N; ++n) {
                hg::HypParams par{N, K, n};
                double fb = hg::d_hyp_bin(par).nats;
                double eb = static_cast<double>(hg::exact::d_hyp_bin(par));
                double fp = hg::d_hyp_poisson(par).nats;
                double ep = static_cast<double>(hg::exact::d_hyp_poisson(par));
                double err = std::max(std::fabs(fb - eb) / std::max(std::fabs(eb), 1e-3),
                                      std::fabs(fp - ep) / std::max(std::fabs(ep), 1e-3));
                if (err > worst) {
                    worst = err;
                    worst_at = "N=" + std::to_string(N) + " K=" + std::to_string(K) +
                               " n=" + std::to_string(n);
                }
                checked += 2;
            }
        }
    }
    o.pass = worst <= 1e-12;
    o.detail = std::to_string(checked) +
               " divergences against the big-integer pipeline, worst relative deviation " +
               hg::format_double(worst) + " at " + worst_at;
    return o;
}

// --- criterion 12: conjecture probe ---------------------------------------------

Outcome criterion12() {
    Outcome o;
    const int points_per_n = 84;  // 12 n-values x 84 = 1008 grid points
    auto viol = hg::conjecture_search(2, 13, points_per_n, 1e-9, 0);
    long planned = 12 * points_per_n;
    o.pass = viol.empty();
    o.detail = std::to_string(planned) + " non-integer-mean grid points swept, " +
               std::to_string(viol.size()) + " violations (evidence, not proof)";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    int which = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            which = std::atoi(argv[i + 1]);
            ++i;
        } else if (std::strcmp(argv[i], "--help") == 0) {
            std::printf("usage: acceptance [--criterion N]   (N in 1..12; default: all)\n");
            return 0;
        }
    }

    const char* names[13] = {nullptr,
                             "sandwich of all applicable bounds (N<=60, C in {2,3})",
                             "chain decomposition equals the divergence (N<=20, C<=3)",
                             "per-step bracket as stated (lower half has counterexamples)",
                             "integer-mean finite verification, n <= 13",
                             "third-moment identity, n <= 13",
                             "Poisson lower bound as stated (N<=60; has counterexamples)",
                             "phi Taylor brackets and derivative table",
                             "asymptotic limit, C=2, r=1/2, N<=2000",
                             "extreme case K=1, n=2 up to N=1e4",
                             "figure-1 dataset invariants (199 rows)",
                             "oracle equivalence, N<=30",
                             "conjecture probe on non-integer means"};

    // stated runtime ceilings (seconds); zero means no target
    const double budget[13] = {0, 60, 0, 0, 10, 0, 0, 0, 30, 0, 0, 0, 0};

    bool all_ok = true;
    ChainGridResult chain;
    bool chain_ready = false;
    for (int c = 1; c <= 12; ++c) {
        if (which != 0 && which != c) continue;
        double t0 = now_s();
        Outcome out;
        switch (c) {
            case 1: out = criterion1(); break;
            case 2:
            case 3:
                if (!chain_ready) {
                    chain = chain_grid();
                    chain_ready = true;
                }
                out = (c == 2) ? chain.identity : chain.bracket;
                break;
            case 4: out = criterion4(); break;
            case 5: out = criterion5(); break;
            case 6: out = criterion6(); break;
            case 7: out = criterion7(); break;
            case 8: out = criterion8(); break;
            case 9: out = criterion9(); break;
            case 10: out = criterion10(); break;
            case 11: out = criterion11(); break;
            case 12: out = criterion12(); break;
        }
        double dt = now_s() - t0;
        if (budget[c] > 0 && dt >= budget[c]) {
            out.pass = false;
            out.detail += "; RUNTIME over target " + std::to_string(budget[c]) + "s";
        }
        std::printf("criterion %2d: %s  [%5.1fs]  %s -- %s\n", c, out.pass ? "PASS" : "FAIL",
                    dt, names[c], out.detail.c_str());
        all_ok = all_ok && out.pass;
    }
    return all_ok ? 0 : 1;
}
