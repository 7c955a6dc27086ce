#include "dilute/report.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "json.hpp"

#include "dilute/errors.hpp"
#include "dilute/expansion.hpp"
#include "dilute/experiments.hpp"
#include "dilute/graphs.hpp"
#include "dilute/measures.hpp"
#include "dilute/series.hpp"
#include "dilute/walks.hpp"

namespace dilute::report {

namespace {

namespace exp_ = dilute::expansion;
namespace ms = dilute::measures;
namespace wk = dilute::walks;

std::string text(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

std::string rs(const Rat& r) { return rat_str(r); }

CriterionOutcome series_identities() {
    CriterionOutcome out{1, "exact generating-series identities", false, "", {}, 0};
    const std::size_t n = 33; // coefficients of x^0 .. x^32
    bool ok = exp_::s1_combinatorial(n) == exp_::named_series("S1", n);
    ok = ok && exp_::named_series("B1_tilde", n) == exp_::named_series("B1", n);
    ok = ok && exp_::named_series("D", n) ==
                   qs::add(exp_::named_series("D2", n), exp_::named_series("D11", n));
    {
        const std::size_t m = 32;
        qs::Series t = qs::catalan_T(m + 1);
        qs::Series dt = qs::derivative(t);
        qs::Series tn = t.truncated(m);
        qs::Series denom =
            qs::sub(qs::Series::constant(1, m), qs::shift_up(qs::mul(tn, tn), 1));
        ok = ok && qs::mul(dt, denom) == qs::pow(tn, 3);
        ok = ok && denom == qs::mul(qs::sqrt_one_minus_4x(m), tn);
    }
    out.pass = ok;
    out.detail = "five coefficientwise identities through x^32, exact rationals";
    return out;
}

CriterionOutcome first_order_oracle() {
    CriterionOutcome out{2, "enumeration counts vs series coefficients", false, "", {}, 0};
    const long expected[] = {0, 0, 1, 6, 28, 120, 495, 2002, 8008};
    qs::Series cat = qs::catalan_T(9);
    qs::Series s1 = exp_::named_series("S1", 9);
    bool ok = s1[1] == 0;
    for (unsigned k = 1; k <= 8; ++k) {
        auto poly = wk::moment_polynomial(k);
        ok = ok && rat(static_cast<long>(poly.counts[0])) == cat[k];
        if (k >= 2) {
            Rat n_k_km1 = rat(static_cast<long>(poly.counts[1]));
            ok = ok && n_k_km1 == s1[k] && n_k_km1 == rat(expected[k]);
        }
    }
    out.pass = ok;
    out.detail = "k <= 8: full-tree counts are Catalan, one-short counts match the "
                 "series, exact";
    return out;
}

CriterionOutcome recursion_cross_checks() {
    CriterionOutcome out{3, "recursions vs type-restricted enumeration", false, "", {}, 0};
    auto poisson = exp_::poisson_model();
    auto regular = exp_::regular_model();
    const std::vector<Rat> cs = {rat(3), rat(10), rat(137, 10)};
    bool ok = true;
    unsigned checks = 0;
    for (const auto* m : {&poisson, &regular}) {
        for (const Rat& c : cs) {
            for (unsigned k = 0; k <= 6; ++k) {
                ok = ok && wk::recursion_eval(6, k, *m, c) ==
                               wk::loop_expectation(k, wk::LoopType::zero,
                                                    wk::RootLaw::ugw_p, *m, c);
                ok = ok && wk::recursion_eval(8, k, *m, c) ==
                               wk::loop_expectation(k, wk::LoopType::one,
                                                    wk::RootLaw::ugw_p, *m, c);
                ok = ok && wk::recursion_eval(9, k, *m, c) ==
                               wk::pair_expectation(k, wk::LoopType::zero,
                                                    wk::LoopType::zero,
                                                    wk::RootLaw::gw_q, *m, c);
                ok = ok && wk::recursion_eval(13, k, *m, c) ==
                               wk::loop_expectation(k, wk::LoopType::two,
                                                    wk::RootLaw::gw_q, *m, c);
                checks += 4;
            }
        }
    }
    out.pass = ok;
    out.detail = text("%u exact equalities, two offspring models, three values of c, "
                      "k <= 6",
                      checks);
    return out;
}

CriterionOutcome order_check() {
    CriterionOutcome out{4, "first-order error scales like 1/c^2 (regular model)", false,
                         "", {}, 0};
    auto regular = exp_::regular_model();
    const std::vector<Rat> cs = {rat(100), rat(1000), rat(10000)};
    bool ok = true;
    double worst = 0.0;
    for (unsigned k = 0; k <= 5; ++k) {
        auto chk = wk::expansion_check(k, regular, cs);
        double spread = chk.spread();
        worst = std::max(worst, spread);
        ok = ok && spread <= 0.2 && std::isfinite(chk.scaled_min) &&
             std::isfinite(chk.scaled_max);
        out.lines.push_back(text("k=%u: residual * c^2 in [%.6g, %.6g], spread %.2f%%",
                                 k, chk.scaled_min, chk.scaled_max, 100.0 * spread));
    }
    out.pass = ok;
    out.detail = text("scaled residuals stable across c in {100, 1000, 10000}; worst "
                      "spread %.2f%% (limit 20%%)",
                      100.0 * worst);
    return out;
}

CriterionOutcome second_order_discrepancy() {
    CriterionOutcome out{5, "second-order discrepancy tables", false, "", {}, 0};
    qs::Series d_closed = exp_::named_series("D", 5);
    auto d_enum = wk::d_oracle_values(5);
    auto mp4 = wk::moment_polynomial(4);
    Rat n42 = rat(static_cast<long>(mp4.counts[2]));

    auto poisson = exp_::poisson_model();
    const Rat c = rat(10);
    const Rat c2 = c * c;
    auto terms = wk::recursion14_terms(4, poisson, c);
    Rat lead = terms.total() * c2;
    Rat oneone = wk::loop_expectation(4, wk::LoopType::one_one, wk::RootLaw::gw_q,
                                      poisson, c) *
                 c2;

    out.lines.push_back("1/c^2 coefficient, closed form vs enumeration:");
    out.lines.push_back(text("  k=3: %s vs %s (agree)", rs(d_closed[3]).c_str(),
                             rs(d_enum[3]).c_str()));
    out.lines.push_back(text("  k=4: %s vs %s (closed form overshoots by %s)",
                             rs(d_closed[4]).c_str(), rs(n42).c_str(),
                             rs(d_closed[4] - n42).c_str()));
    out.lines.push_back(text("quadruple-edge pair recursion at k=4, c=10, by term:"));
    out.lines.push_back(text("  t1=%s t2=%s t3=%s t4=%s t5=%s total=%s", rs(terms.t1).c_str(),
                             rs(terms.t2).c_str(), rs(terms.t3).c_str(),
                             rs(terms.t4).c_str(), rs(terms.t5).c_str(),
                             rs(terms.total()).c_str()));
    out.lines.push_back(text("  leading coefficient (x c^2): recursion %s vs enumeration %s",
                             rs(lead).c_str(), rs(oneone).c_str()));

    out.pass = d_closed[3] == 1 && d_enum[3] == 1 && d_closed[4] == 16 && n42 == 14 &&
               d_enum[4] == 14 && lead == 8 && oneone == 6;
    out.detail = "both routes computed and emitted side by side; the gap is the point";
    return out;
}

CriterionOutcome density_moment_duality() {
    CriterionOutcome out{6, "density-moment duality and the sign test", false, "", {}, 0};
    qs::Series s1 = exp_::named_series("S1", 13);
    auto sigma1 = ms::named_form("sigma1");
    bool ok = true;
    for (unsigned k = 0; k <= 12; ++k)
        ok = ok && ms::density_moments_exact(sigma1.q, k) == s1[k];

    for (const char* name : {"sigma1", "sigma1_hat", "sigma2_hat"})
        ok = ok && ms::form_moment_exact(ms::named_form(name), 0) == 0;

    auto bhat = exp_::coefficient_table("b_hat", 6).values;
    auto dhat_p = exp_::coefficient_table("d_hat", 4).values;
    auto dhat_o =
        exp_::coefficient_table("d_hat", 4, exp_::DSource::oracle_enumeration).values;
    auto hat1 = ms::named_form("sigma1_hat");
    auto hat2 = ms::named_form("sigma2_hat");
    auto hat1p = ms::named_form("sigma1_hat_printed");
    auto hat2p = ms::named_form("sigma2_hat_printed");

    bool matched = true, printed_differs1 = false, printed_differs2 = false;
    for (unsigned k = 0; k <= 5; ++k) {
        matched = matched && ms::form_moment_exact(hat1, k) == bhat[k];
        if (ms::form_moment_exact(hat1p, k) != bhat[k]) printed_differs1 = true;
    }
    for (unsigned k = 0; k <= 3; ++k) {
        matched = matched && ms::form_moment_exact(hat2, k) == dhat_p[k] &&
                  dhat_p[k] == dhat_o[k];
        if (ms::form_moment_exact(hat2p, k) != dhat_p[k]) printed_differs2 = true;
    }
    out.lines.push_back("moment tables vs closed-form numerators:");
    out.lines.push_back(text("  +(x^4 - 5x^2 + 4): matches the first-order table for "
                             "k <= 5; the printed sign does not (first break at k=1: "
                             "%s vs %s)",
                             rs(ms::form_moment_exact(hat1p, 1)).c_str(),
                             rs(bhat[1]).c_str()));
    out.lines.push_back(text("  +(2x^8 - 17x^6 + 46x^4 - (325/8)x^2 + 21/4): matches "
                             "the second-order table for k <= 3 under either "
                             "coefficient source; the printed sign does not"));
    out.pass = ok && matched && printed_differs1 && printed_differs2;
    out.detail = "duality exact to k=12; three correction numerators integrate to "
                 "zero mass; sign test as emitted";
    return out;
}

CriterionOutcome stieltjes_numerics() {
    CriterionOutcome out{7, "transform inversion and branch identities", false, "", {}, 0};
    auto sigma1 = ms::named_form("sigma1");
    double grid_err = 0.0;
    for (int i = -19; i <= 19; ++i) {
        double x = i / 10.0;
        grid_err = std::max(grid_err, std::abs(ms::recover_density("H1", x, 1e-8) -
                                               ms::density_eval(sigma1, x)));
    }

    using cd = std::complex<double>;
    std::mt19937_64 gen(0x5eed1234ULL);
    std::uniform_real_distribution<double> re(-6.0, 6.0);
    std::uniform_real_distribution<double> im(1e-2, 4.0);
    double quad_err = 0.0, factor_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        cd z(re(gen), (i % 2 ? 1.0 : -1.0) * im(gen));
        cd h = ms::stieltjes_eval("H", z);
        quad_err = std::max(quad_err, std::abs(h * h - z * h + 1.0));
        cd h1 = ms::stieltjes_eval("H1", z);
        factor_err =
            std::max(factor_err, std::abs(h1 - std::pow(h, 5) / (1.0 - h * h)));
    }
    out.pass = grid_err <= 1e-5 && quad_err <= 1e-12 && factor_err <= 1e-12;
    out.detail = text("grid recovery err %.3g (tol 1e-5); quadratic relation err %.3g, "
                      "factored form err %.3g (tol 1e-12) at 100 off-cut points",
                      grid_err, quad_err, factor_err);
    return out;
}

CriterionOutcome monte_carlo_moments(const AcceptanceOptions& opt) {
    CriterionOutcome out{8, "Monte Carlo moments of the diluted ensemble", false, "", {}, 0};
    auto e = lab::moment_experiment("erdos_renyi", 3000, rat(20), 20, opt.seed, 8, 4000);
    bool m4ok = std::abs(e.mean[4] - 2.05) <= 0.02;
    bool m6ok = std::abs(e.mean[6] - 5.3025) <= 0.1;
    bool odd_ok = true;
    double worst_ratio = 0.0;
    for (unsigned k = 1; k <= 7; k += 2) {
        double ratio;
        if (e.se[k] > 0.0)
            ratio = std::abs(e.mean[k]) / e.se[k];
        else
            ratio = e.mean[k] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > 3.0) odd_ok = false;
        out.lines.push_back(
            text("  m_%u mean %.6g, se %.3g, |mean|/se %.3g", k, e.mean[k], e.se[k], ratio));
    }
    out.lines.push_back(text("  m_4 mean %.6g (window 2.05 +- 0.02), m_6 mean %.6g "
                             "(window 5.3025 +- 0.1)",
                             e.mean[4], e.mean[6]));
    out.pass = m4ok && m6ok && odd_ok;
    out.detail = text("m4 %.4f, m6 %.4f, worst odd |mean|/se %.3g; windows target the "
                      "n -> infinity values, and at n=3000, c=20 the finite-size cycle "
                      "terms (c^2/n and above) plus the top-eigenvalue outlier exceed "
                      "them for every seed",
                      e.mean[4], e.mean[6], worst_ratio);
    return out;
}

CriterionOutcome kesten_mckay_histogram(const AcceptanceOptions& opt) {
    CriterionOutcome out{9, "regular-graph histogram vs rescaled Kesten-McKay", false, "",
                         {}, 0};
    auto g = lab::gen_graph("regular", 3000, rat(20), lab::rep_seed(opt.seed, 0));
    auto h = lab::Histogram::standard();
    h.add_all(lab::spectrum(g, 4000));
    double l1 = lab::histogram_l1(h, 3000, 1, ms::kesten_mckay(rat(20), true));
    out.pass = l1 <= 0.08;
    out.detail = text("L1 distance %.4f (limit 0.08), n=3000, degree 20", l1);
    return out;
}

CriterionOutcome figure_pipeline(const AcceptanceOptions& opt) {
    CriterionOutcome out{10, "figure pipeline at desk scale", false, "", {}, 0};
    lab::ExperimentConfig cfg;
    cfg.figure = "4R";
    cfg.model = "erdos_renyi";
    cfg.n = 5000;
    cfg.c = rat(20);
    cfg.reps = 40;
    cfg.seed = opt.seed;
    cfg.dense_limit = 8000;
    cfg.kmax = 8;
    auto results = lab::compare_figures(cfg, {"4R", "5R"});
    const auto& r4 = results[0];
    const auto& r5 = results[1];
    out.lines.push_back(
        text("4R: correlation %.3f (needs >= 0.5), l1 %.3f", r4.correlation, r4.l1));
    out.lines.push_back(text("5R: correlation %.3f, l1 %.3f (emitted, not asserted)",
                             r5.correlation, r5.l1));
    if (!opt.out_dir.empty()) {
        for (const auto* r : {&r4, &r5}) {
            std::string path = opt.out_dir + "/fig" + r->config.figure + ".csv";
            std::ofstream f(path);
            if (f) {
                f << lab::to_csv(*r);
                out.lines.push_back("wrote " + path);
            } else {
                out.lines.push_back("could not write " + path);
            }
        }
    }
    out.pass = r4.correlation >= 0.5;
    out.detail = text("first-order figure correlation %.3f at n=5000, c=20, 40 "
                      "replicates; second-order summary emitted alongside",
                      r4.correlation);
    return out;
}

} // namespace

std::vector<CriterionOutcome> run_acceptance(
    const AcceptanceOptions& opt,
    const std::function<void(const CriterionOutcome&)>& on_done) {
    using clock = std::chrono::steady_clock;
    std::vector<std::function<CriterionOutcome()>> steps = {
        [] { return series_identities(); },
        [] { return first_order_oracle(); },
        [] { return recursion_cross_checks(); },
        [] { return order_check(); },
        [] { return second_order_discrepancy(); },
        [] { return density_moment_duality(); },
        [] { return stieltjes_numerics(); },
        [&] { return monte_carlo_moments(opt); },
        [&] { return kesten_mckay_histogram(opt); },
        [&] { return figure_pipeline(opt); },
    };
    std::vector<CriterionOutcome> outcomes;
    outcomes.reserve(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) {
        auto t0 = clock::now();
        CriterionOutcome o;
        try {
            o = steps[i]();
        } catch (const std::exception& e) {
            o.id = static_cast<int>(i) + 1;
            o.title = "criterion aborted";
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        o.runtime_ms =
            std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        if (on_done) on_done(o);
        outcomes.push_back(std::move(o));
    }
    return outcomes;
}

bool all_pass(const std::vector<CriterionOutcome>& outcomes) {
    for (const auto& o : outcomes)
        if (!o.pass) return false;
    return true;
}

std::string acceptance_json(const std::vector<CriterionOutcome>& outcomes,
                            const AcceptanceOptions& opt) {
    nlohmann::ordered_json j;
    j["version"] = "0.1.0";
    j["seed"] = opt.seed;
    j["all_pass"] = all_pass(outcomes);
    double total = 0;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& o : outcomes) {
        total += o.runtime_ms;
        nlohmann::ordered_json e;
        e["id"] = o.id;
        e["title"] = o.title;
        e["pass"] = o.pass;
        e["detail"] = o.detail;
        e["lines"] = o.lines;
        e["runtime_ms"] = o.runtime_ms;
        arr.push_back(std::move(e));
    }
    j["criteria"] = std::move(arr);
    j["runtime_ms"] = total;
    return j.dump(2) + "\n";
}

} // namespace dilute::report
