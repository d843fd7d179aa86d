// Command line front end: exact divergences, bound reports, figure datasets
// and the verification suites, emitted as CSV or JSON.

#include <iostream>

#include <CLI11.hpp>

#include "hypergeo/hypergeo.hpp"

namespace hg = hypergeo;

namespace {

constexpr const char* kVersion = "hypergeo 1.0.0";

struct GlobalOpts {
    std::string format = "csv";
    double tolerance = 1e-10;
    std::uint64_t seed = 0;
};

void emit(const hg::ReportDocument& doc, const GlobalOpts& g) {
    if (g.format == "json")
        std::cout << hg::to_json(doc);
    else
        std::cout << hg::to_csv(doc);
}

hg::Cell entry_or_blank(const std::map<std::string, hg::BoundEntry>& m, const std::string& key,
                        bool slack) {
    auto it = m.find(key);
    if (it == m.end()) return std::string{};
    return slack ? it->second.slack : it->second.value;
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out += "; ";
        out += f;
    }
    return out;
}

std::string colors_string(const std::vector<int64_t>& k) {
    std::string out;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(k[i]);
    }
    return out;
}

const std::vector<std::string> kLowerNames{"stam_lower", "quadratic", "log_integral",
                                           "opt_integral", "kravchuk", "poisson"};
const std::vector<std::string> kUpperNames{"stam_upper", "chi2", "log_upper", "summed_upper"};

hg::ReportDocument divergence_doc(const hg::BoundsReport& rep, int64_t N, int64_t n,
                                  const std::string& kdesc, const GlobalOpts& g) {
    hg::ReportDocument doc;
    doc.command = "divergence";
    doc.params = {{"N", std::to_string(N)},
                  {"n", std::to_string(n)},
                  {"K", kdesc},
                  {"target", hg::to_string(rep.target)}};
    doc.meta = {{"tool", kVersion}, {"tolerance", hg::format_double(g.tolerance)}};
    doc.columns = {"target", "exact"};
    std::vector<hg::Cell> row{std::string(hg::to_string(rep.target)), rep.exact};
    for (const auto& name : kLowerNames) {
        doc.columns.push_back("lower_" + name);
        row.push_back(entry_or_blank(rep.lower, name, false));
    }
    for (const auto& name : kUpperNames) {
        doc.columns.push_back("upper_" + name);
        row.push_back(entry_or_blank(rep.upper, name, false));
    }
    doc.columns.push_back("worst_slack");
    row.push_back(rep.worst_slack());
    doc.columns.push_back("flags");
    row.push_back(join_flags(rep.flags));
    doc.rows.push_back(std::move(row));
    return doc;
}

hg::ReportDocument bounds_doc(const hg::BoundsReport& rep, int64_t N, int64_t n,
                              const std::string& kdesc) {
    hg::ReportDocument doc;
    doc.command = "bounds";
    doc.params = {{"N", std::to_string(N)},
                  {"n", std::to_string(n)},
                  {"K", kdesc},
                  {"target", hg::to_string(rep.target)}};
    doc.meta = {{"tool", kVersion}, {"flags", join_flags(rep.flags)}};
    doc.columns = {"kind", "name", "value", "slack"};
    doc.rows.push_back({std::string("exact"), std::string("exact"), rep.exact, 0.0});
    for (const auto& name : kLowerNames) {
        auto it = rep.lower.find(name);
        if (it != rep.lower.end())
            doc.rows.push_back(
                {std::string("lower"), name, it->second.value, it->second.slack});
    }
    for (const auto& name : kUpperNames) {
        auto it = rep.upper.find(name);
        if (it != rep.upper.end())
            doc.rows.push_back(
                {std::string("upper"), name, it->second.value, it->second.slack});
    }
    return doc;
}

// ---------------------------------------------------------------------------
// verify suites: each returns rows and a pass flag
// ---------------------------------------------------------------------------

struct SuiteResult {
    std::vector<std::vector<hg::Cell>> rows;  // suite, check, status, value, detail
    bool ok = true;
};

void add_check(SuiteResult& r, const std::string& suite, const std::string& check, bool pass,
               double value, const std::string& detail) {
    r.rows.push_back({suite, check, std::string(pass ? "pass" : "FAIL"), value, detail});
    r.ok = r.ok && pass;
}

SuiteResult run_phi_suite(double tol) {
    SuiteResult r;
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
    add_check(r, "phi", "taylor-brackets-grid", worst >= -1e-12, worst,
              "min normalized slack over 1e5 log-spaced points in [0,1e3]");

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
    add_check(r, "phi", "derivative-table-vs-finite-differences", fd_worst <= 1e-6, fd_worst,
              "max relative error, orders 1..5 at 20 points");
    (void)tol;
    return r;
}

SuiteResult run_thm33_suite(int64_t nmax, double tol) {
    SuiteResult r;
    hg::SweepOptions opt;
    opt.tolerance = tol;
    hg::Thm33Summary s = hg::verify_thm33_all(nmax, opt);
    for (const auto& c : s.cases) {
        char name[48];
        std::snprintf(name, sizeof name, "case n=%lld k=%lld", static_cast<long long>(c.n),
                      static_cast<long long>(c.k));
        std::string detail = c.analytic_branch ? "analytic branch" : "numeric sweep";
        if (c.third_moment_zero) detail += ", third moment zero";
        add_check(r, "thm33", name, c.passed, c.min_slack, detail);
    }
    add_check(r, "thm33", "all-cases-pass", s.all_passed,
              static_cast<double>(s.passed), "passed cases");
    add_check(r, "thm33", "case-count", s.total == 78, static_cast<double>(s.total),
              "swept nondegenerate cases; 77 with positive third moment; the "
              "91-case bookkeeping also counts degenerate means");
    r.rows.push_back({std::string("thm33"), std::string("count-note"), std::string("info"),
                      static_cast<double>(s.third_moment_positive),
                      std::string("strictly-positive third moments (k=0,n endpoints excluded: " +
                                  std::to_string(s.degenerate_endpoints) + ")")});
    return r;
}

SuiteResult run_moments_suite() {
    SuiteResult r;
    hg::MomentIdentityReport rep = hg::verify_moment_identities();
    std::size_t shown = 0;
    for (const auto& row : rep.rows) {
        if (!row.pass || shown < 6) {
            add_check(r, "moments", row.name, row.pass, row.rel_err, "closed vs enumeration");
            ++shown;
        }
        r.ok = r.ok && row.pass;
    }
    add_check(r, "moments", "all-identities", rep.all_pass,
              static_cast<double>(rep.rows.size()), "checks run");
    return r;
}

SuiteResult run_asymptote_suite(double rr, int64_t nmax_pop, int steps) {
    SuiteResult r;
    std::vector<double> w{0.5, 0.5};
    hg::AsymptoteTrace tr = hg::asymptote_experiment(w, rr, steps, nmax_pop);
    add_check(r, "asymptote", "final-error", tr.error.back() < 5e-3, tr.error.back(),
              "limit " + hg::format_double(tr.limit));
    bool tail_ok = true;
    std::size_t start = tr.error.size() * 2 / 3;
    for (std::size_t i = start + 1; i < tr.error.size(); ++i)
        tail_ok = tail_ok && tr.error[i] <= tr.error[i - 1] + 1e-6;
    add_check(r, "asymptote", "tail-decreasing", tail_ok,
              static_cast<double>(tr.error.size()), "last third monotone within 1e-6");
    return r;
}

SuiteResult run_extreme_suite(int64_t nmax_pop) {
    SuiteResult r;
    bool lower_ok = true;
    double worst_ratio = 0.0;
    for (const auto& pt : hg::extreme_case_trace(2, nmax_pop)) {
        lower_ok = lower_ok && pt.D >= 1.0 / (2.0 * (pt.N - 1.0) * (pt.N - 1.0)) - 1e-15;
        if (pt.N >= 100) worst_ratio = std::max(worst_ratio, std::fabs(pt.N2D - 1.0) * pt.N);
    }
    add_check(r, "extreme", "quadratic-lower-bound-all-N", lower_ok,
              static_cast<double>(nmax_pop), "D >= 1/(2(N-1)^2) for 2 <= N <= Nmax");
    if (nmax_pop >= 100) {
        double at100 = hg::extreme_case_trace(100, 100)[0].N2D;
        add_check(r, "extreme", "N=100-envelope", std::fabs(at100 - 1.0) <= 0.05,
                  at100, "|N^2 D - 1| <= 0.05");
    }
    if (nmax_pop >= 1000) {
        double at1000 = hg::extreme_case_trace(1000, 1000)[0].N2D;
        add_check(r, "extreme", "N=1000-envelope", std::fabs(at1000 - 1.0) <= 0.005,
                  at1000, "|N^2 D - 1| <= 0.005");
        add_check(r, "extreme", "empirical-envelope", worst_ratio <= 2.5, worst_ratio,
                  "sup_N N |N^2 D - 1| for N >= 100");
    }
    return r;
}

SuiteResult run_conjecture_suite(int64_t nmax, int points, double tol, std::uint64_t seed) {
    SuiteResult r;
    auto viol = hg::conjecture_search(2, nmax, points, std::max(tol, 1e-9), seed);
    add_check(r, "conjecture", "no-violations", viol.empty(),
              static_cast<double>(viol.size()),
              std::to_string(points) + " p-points per n, non-integer means only");
    for (const auto& v : viol) {
        char name[64];
        std::snprintf(name, sizeof name, "violation n=%lld p=%.6f",
                      static_cast<long long>(v.n), v.p);
        add_check(r, "conjecture", name, false, v.slack, "projected slack");
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact divergences and bounds for sampling without replacement"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--tolerance", g.tolerance, "slack tolerance for verify suites")
        ->capture_default_str();
    app.add_option("--seed", g.seed, "jitter seed for the conjecture grid")
        ->capture_default_str();

    int64_t N = 0, K = -1, n = 0;
    std::vector<int64_t> colors;
    std::string target = "bin";

    auto add_params = [&](CLI::App* cmd, bool need_N = true) {
        if (need_N) cmd->add_option("-N", N, "population size")->required();
        cmd->add_option("-K", K, "white-ball count");
        cmd->add_option("-n", n, "sample size");
        cmd->add_option("--colors", colors, "per-color counts")->delimiter(',');
        cmd->add_option("--target", target, "approximating family")
            ->check(CLI::IsMember({"bin", "poisson", "multinomial"}));
    };

    CLI::App* cmd_div = app.add_subcommand("divergence", "exact divergence with all bounds");
    add_params(cmd_div);
    CLI::App* cmd_bounds = app.add_subcommand("bounds", "bound-by-bound report");
    add_params(cmd_bounds);

    int64_t fig_N = 200, fig_n = 101, kmin = 1, kmax = -1;
    CLI::App* cmd_f1 = app.add_subcommand("figure1", "divergence and bounds across K");
    cmd_f1->add_option("-N", fig_N, "population size")->capture_default_str();
    cmd_f1->add_option("-n", fig_n, "sample size")->capture_default_str();
    cmd_f1->add_option("--kmin", kmin)->capture_default_str();
    cmd_f1->add_option("--kmax", kmax, "defaults to N-1");

    double qmin = 0.01, qmax = 0.99;
    int qsteps = 99;
    int64_t fig2_C = 2;
    CLI::App* cmd_f2 = app.add_subcommand("figure2", "large-N bound limits against q = n/N");
    cmd_f2->add_option("--qmin", qmin)->capture_default_str();
    cmd_f2->add_option("--qmax", qmax)->capture_default_str();
    cmd_f2->add_option("--steps", qsteps)->capture_default_str();
    cmd_f2->add_option("--colors-count", fig2_C, "number of colors C")->capture_default_str();

    std::string suite = "all";
    double asy_r = 0.5;
    int64_t verify_Nmax = 0, conj_nmax = 13;
    int asy_steps = 20, conj_points = 80;
    CLI::App* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    cmd_verify->add_option("suite", suite, "thm33|moments|phi|asymptote|extreme|conjecture|all")
        ->check(CLI::IsMember({"thm33", "moments", "phi", "asymptote", "extreme", "conjecture",
                               "all"}));
    cmd_verify->add_option("--r", asy_r, "asymptote ratio r = 1 - n/N")->capture_default_str();
    cmd_verify->add_option("--Nmax", verify_Nmax, "population ceiling for asymptote/extreme");
    cmd_verify->add_option("--steps", asy_steps)->capture_default_str();
    cmd_verify->add_option("--points", conj_points, "conjecture p-points per n")
        ->capture_default_str();
    cmd_verify->add_option("--nmax", conj_nmax, "largest n for thm33/conjecture")
        ->capture_default_str();

    double a_r = 0.5;
    int64_t a_Nmax = 2000, a_Nmin = 100;
    int a_steps = 20;
    std::vector<double> a_weights{0.5, 0.5};
    CLI::App* cmd_asym = app.add_subcommand("asymptote", "exact divergences along a schedule");
    cmd_asym->add_option("--r", a_r)->capture_default_str();
    cmd_asym->add_option("--Nmax", a_Nmax)->capture_default_str();
    cmd_asym->add_option("--Nmin", a_Nmin)->capture_default_str();
    cmd_asym->add_option("--steps", a_steps)->capture_default_str();
    cmd_asym->add_option("--weights", a_weights, "color weights")->delimiter(',');

    int64_t c_nmin = 2, c_nmax = 13;
    int c_points = 80;
    CLI::App* cmd_conj = app.add_subcommand("conjecture", "probe non-integer-mean cases");
    cmd_conj->add_option("--nmin", c_nmin)->capture_default_str();
    cmd_conj->add_option("--nmax", c_nmax)->capture_default_str();
    cmd_conj->add_option("--points", c_points, "p-points per n")->capture_default_str();

    // let --format/--tolerance/--seed appear after the subcommand name
    for (CLI::App* sc : {cmd_div, cmd_bounds, cmd_f1, cmd_f2, cmd_verify, cmd_asym, cmd_conj})
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_div->parsed() || cmd_bounds->parsed()) {
            hg::BoundsReport rep;
            std::string kdesc;
            if (!colors.empty()) {
                hg::MultiHypParams par{N, colors, n};
                rep = hg::bounds_report(par);
                kdesc = colors_string(colors);
            } else {
                if (K < 0) throw CLI::ValidationError("divergence", "need -K or --colors");
                hg::HypParams par{N, K, n};
                hg::Target t = target == "poisson"     ? hg::Target::Poisson
                               : target == "multinomial" ? hg::Target::Multinomial
                                                         : hg::Target::Bin;
                rep = hg::bounds_report(par, t);
                kdesc = std::to_string(K);
            }
            emit(cmd_div->parsed() ? divergence_doc(rep, N, n, kdesc, g)
                                   : bounds_doc(rep, N, n, kdesc),
                 g);
            return 0;
        }

        if (cmd_f1->parsed()) {
            if (kmax < 0) kmax = fig_N - 1;
            hg::ReportDocument doc;
            doc.command = "figure1";
            doc.params = {{"N", std::to_string(fig_N)},
                          {"n", std::to_string(fig_n)},
                          {"kmin", std::to_string(kmin)},
                          {"kmax", std::to_string(kmax)}};
            doc.meta = {{"tool", kVersion}};
            doc.columns = {"K", "exact", "stam_lower", "stam_upper", "new_lower", "new_upper"};
            for (int64_t Kv = kmin; Kv <= kmax; ++Kv) {
                hg::HypParams par{fig_N, Kv, fig_n};
                double exact = hg::d_hyp_bin(par).nats;
                std::vector<double> p{par.p(), 1.0 - par.p()};
                double slv = hg::stam_lower(2, fig_N, fig_n, hg::q_constant(p));
                double suv = hg::stam_upper(2, fig_N, fig_n);
                double nl = hg::multi_lower_quadratic(2, fig_N, fig_n);
                if (2 * fig_n <= fig_N)
                    nl = std::max(nl, hg::multi_lower_opt(2, fig_N, fig_n));
                double nu = hg::summed_step_bounds(2, fig_N, fig_n).upper;
                if (fig_n < fig_N) nu = std::min(nu, hg::multi_upper_log(2, fig_N, fig_n));
                doc.rows.push_back({Kv, exact, slv, suv, nl, nu});
            }
            emit(doc, g);
            return 0;
        }

        if (cmd_f2->parsed()) {
            hg::ReportDocument doc;
            doc.command = "figure2";
            doc.params = {{"qmin", hg::format_double(qmin)},
                          {"qmax", hg::format_double(qmax)},
                          {"steps", std::to_string(qsteps)},
                          {"C", std::to_string(fig2_C)}};
            doc.meta = {{"tool", kVersion},
                        {"note", "large-N limits of the bounds as functions of q = n/N"}};
            doc.columns = {"q", "stam_lower", "stam_upper", "new_lower", "new_upper"};
            for (int i = 0; i < qsteps; ++i) {
                double q = qmin + (qmax - qmin) * (qsteps == 1 ? 0.0 : static_cast<double>(i) /
                                                                           (qsteps - 1));
                doc.rows.push_back({q, hg::stam_lower_limit(fig2_C, q),
                                    hg::stam_upper_limit(fig2_C, q),
                                    hg::lower_bound_limit(fig2_C, q),
                                    hg::upper_bound_limit(fig2_C, q)});
            }
            emit(doc, g);
            return 0;
        }

        if (cmd_asym->parsed()) {
            hg::AsymptoteTrace tr = hg::asymptote_experiment(a_weights, a_r, a_steps, a_Nmax,
                                                             a_Nmin);
            hg::ReportDocument doc;
            doc.command = "asymptote";
            doc.params = {{"r", hg::format_double(a_r)},
                          {"Nmax", std::to_string(a_Nmax)},
                          {"Nmin", std::to_string(a_Nmin)},
                          {"steps", std::to_string(a_steps)}};
            doc.meta = {{"tool", kVersion}, {"limit", hg::format_double(tr.limit)}};
            doc.columns = {"N", "n", "exact", "abs_error"};
            for (std::size_t i = 0; i < tr.N.size(); ++i)
                doc.rows.push_back({tr.N[i], tr.n[i], tr.value[i], tr.error[i]});
            emit(doc, g);
            return 0;
        }

        if (cmd_conj->parsed()) {
            auto viol = hg::conjecture_search(c_nmin, c_nmax, c_points,
                                              std::max(g.tolerance, 1e-9), g.seed);
            hg::ReportDocument doc;
            doc.command = "conjecture";
            doc.params = {{"nmin", std::to_string(c_nmin)},
                          {"nmax", std::to_string(c_nmax)},
                          {"points", std::to_string(c_points)},
                          {"seed", std::to_string(g.seed)}};
            doc.meta = {{"tool", kVersion},
                        {"violations", std::to_string(viol.size())}};
            doc.columns = {"n", "p", "beta", "slack"};
            for (const auto& v : viol) doc.rows.push_back({v.n, v.p, v.beta, v.slack});
            emit(doc, g);
            return 0;
        }

        if (cmd_verify->parsed()) {
            SuiteResult all;
            auto merge = [&](const SuiteResult& s) {
                all.ok = all.ok && s.ok;
                for (const auto& row : s.rows) all.rows.push_back(row);
            };
            if (suite == "phi" || suite == "all") merge(run_phi_suite(g.tolerance));
            if (suite == "thm33" || suite == "all")
                merge(run_thm33_suite(conj_nmax, g.tolerance));
            if (suite == "moments" || suite == "all") merge(run_moments_suite());
            if (suite == "asymptote" || suite == "all")
                merge(run_asymptote_suite(asy_r, verify_Nmax > 0 ? verify_Nmax : 2000,
                                          asy_steps));
            if (suite == "extreme" || suite == "all")
                merge(run_extreme_suite(verify_Nmax > 0 ? verify_Nmax : 10000));
            if (suite == "conjecture" || suite == "all")
                merge(run_conjecture_suite(conj_nmax, conj_points, g.tolerance, g.seed));

            hg::ReportDocument doc;
            doc.command = "verify";
            doc.params = {{"suite", suite}};
            doc.meta = {{"tool", kVersion},
                        {"tolerance", hg::format_double(g.tolerance)},
                        {"result", all.ok ? "pass" : "fail"}};
            doc.columns = {"suite", "check", "status", "value", "detail"};
            doc.rows = all.rows;
            emit(doc, g);
            return all.ok ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const hg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
