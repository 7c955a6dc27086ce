// Command-line front end: one subcommand per module area. Exit codes:
// 0 completed (reported discrepancies are data, not failures), 1 usage
// problems, 2 numerical or resource failures.
#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dilute/errors.hpp"
#include "dilute/expansion.hpp"
#include "dilute/experiments.hpp"
#include "dilute/graphs.hpp"
#include "dilute/measures.hpp"
#include "dilute/report.hpp"
#include "dilute/series.hpp"
#include "dilute/walks.hpp"

namespace {

using dilute::Rat;
using dilute::rat_parse;
using dilute::rat_str;
namespace exp_ = dilute::expansion;
namespace lab = dilute::lab;
namespace ms = dilute::measures;
namespace wk = dilute::walks;

void emit(const std::string& body, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(body.c_str(), stdout);
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw dilute::usage_error("cannot open output file '" + out_path + "'");
    f << body;
}

std::string num12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

exp_::FactorialMomentModel offspring_model(const std::string& name) {
    if (name == "poisson") return exp_::poisson_model();
    if (name == "regular") return exp_::regular_model();
    throw dilute::usage_error("unknown offspring model '" + name +
                              "' (expected poisson or regular)");
}

ms::DensityForm density_form(const std::string& name, const std::string& c_text,
                             bool rescaled) {
    if (name == "kesten_mckay") {
        if (c_text.empty())
            throw dilute::usage_error("kesten_mckay needs --c (the degree)");
        return ms::kesten_mckay(rat_parse(c_text), rescaled);
    }
    return ms::named_form(name);
}

int run(int argc, char** argv) {
    CLI::App app{"asymptotic spectral measures of dilute random graphs"};
    app.require_subcommand(1);

    std::string name, table, c_text, out_path, svg_path;
    std::string offspring = "poisson", graph_model = "erdos_renyi";
    std::string d_source = "paper";
    unsigned order = 8, k = 4, n = 1000, reps = 1, kmax = 8, bins = 140;
    unsigned dense_limit = 4000;
    int eq = 6;
    std::uint64_t seed = 1;
    double at = 0.0, re = 0.0, im = 1.0, eps = 1e-8, tol = 1e-9;
    bool rescaled = false;

    auto* series = app.add_subcommand("series", "generating series and coefficient tables");
    series->add_option("--name", name, "series name (S1, B1, B1_tilde, B1_2, A0_2, "
                                       "A0_3, D2, D11, D, B_hat, D_hat, B0, B0_tilde)");
    series->add_option("--table", table, "coefficient table instead: a, b, d, b_hat, "
                                         "d_hat, sigma_f");
    series->add_option("--order", order, "number of coefficients");
    series->add_option("--d-source", d_source, "d coefficients: paper or oracle")
        ->check(CLI::IsMember({"paper", "oracle"}));
    series->add_option("--out", out_path, "write to file instead of stdout");

    auto* oracle = app.add_subcommand("oracle", "closed-walk enumeration counts");
    oracle->add_option("--k", k, "half-length of the walks")->required();
    oracle->add_option("--c", c_text, "also evaluate the moment polynomial at c");
    oracle->add_option("--out", out_path, "write to file instead of stdout");

    auto* recursion = app.add_subcommand("recursion", "loop-count recursion values");
    recursion->add_option("--eq", eq, "recursion identifier")->check(CLI::Range(6, 15));
    recursion->add_option("--k", k, "half-length")->required();
    recursion->add_option("--model", offspring, "offspring model: poisson or regular");
    recursion->add_option("--c", c_text, "mean degree, rational p/q");
    recursion->add_option("--out", out_path, "write to file instead of stdout");

    auto* density = app.add_subcommand("density", "closed-form spectral densities");
    density->add_option("--name", name, "sigma, sigma1, sigma1_hat, sigma2_hat, "
                                        "sigma1_hat_printed, sigma2_hat_printed, "
                                        "sigma2_raw, kesten_mckay")
        ->required();
    auto* at_opt = density->add_option("--at", at, "evaluation point");
    auto* em_opt = density->add_option("--exact-moment", k, "print the exact 2k-th moment");
    auto* qm_opt = density->add_option("--quadrature", k, "print the 2k-th moment by quadrature");
    density->add_option("--tol", tol, "quadrature accuracy target");
    density->add_option("--c", c_text, "degree for kesten_mckay, rational p/q");
    density->add_flag("--rescaled", rescaled, "rescale kesten_mckay by sqrt(c)");
    density->add_option("--out", out_path, "write to file instead of stdout");

    auto* stieltjes = app.add_subcommand("stieltjes", "analytic transforms");
    stieltjes->add_option("--name", name, "H, H1, H2, H_hatB, H_hatD")->required();
    stieltjes->add_option("--re", re, "real part of z");
    stieltjes->add_option("--im", im, "imaginary part of z");
    auto* rec_opt =
        stieltjes->add_option("--recover", at, "recover the density at this point instead");
    stieltjes->add_option("--eps", eps, "boundary offset for recovery");
    stieltjes->add_option("--out", out_path, "write to file instead of stdout");

    auto* simulate = app.add_subcommand("simulate", "replicated spectral moments");
    simulate->add_option("--model", graph_model, "erdos_renyi or regular");
    simulate->add_option("--n", n, "vertices")->required();
    simulate->add_option("--c", c_text, "mean degree, rational p/q")->required();
    simulate->add_option("--reps", reps, "replicates");
    simulate->add_option("--seed", seed, "master seed");
    simulate->add_option("--kmax", kmax, "highest moment");
    simulate->add_option("--dense-limit", dense_limit, "largest dense eigenproblem");
    simulate->add_option("--out", out_path, "write to file instead of stdout");

    auto* compare = app.add_subcommand("compare", "histogram vs closed form, by figure");
    std::string figure = "4L";
    compare->add_option("--figure", figure, "4L, 4R, 5L or 5R")
        ->check(CLI::IsMember({"4L", "4R", "5L", "5R"}));
    compare->add_option("--model", graph_model, "erdos_renyi or regular");
    compare->add_option("--n", n, "vertices")->required();
    compare->add_option("--c", c_text, "mean degree, rational p/q")->required();
    compare->add_option("--reps", reps, "replicates");
    compare->add_option("--seed", seed, "master seed");
    compare->add_option("--bins", bins, "histogram bins across [-3.5, 3.5]");
    compare->add_option("--kmax", kmax, "highest tracked moment");
    compare->add_option("--dense-limit", dense_limit, "largest dense eigenproblem");
    compare->add_option("--out", out_path, "write the per-bin CSV here");
    compare->add_option("--svg", svg_path, "write a minimal overlay plot here");

    auto* report_cmd = app.add_subcommand("report", "run the acceptance battery");
    report_cmd->add_option("--seed", seed, "master seed");
    report_cmd->add_option("--out", out_path, "write the JSON document here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (series->parsed()) {
        if (!table.empty()) {
            auto src = d_source == "oracle" ? exp_::DSource::oracle_enumeration
                                            : exp_::DSource::paper_series;
            emit(exp_::to_csv(exp_::coefficient_table(table, order, src)), out_path);
        } else if (!name.empty()) {
            emit(dilute::qs::to_csv(exp_::named_series(name, order)) + "\n", out_path);
        } else {
            throw dilute::usage_error("series needs --name or --table");
        }
    } else if (oracle->parsed()) {
        auto poly = wk::moment_polynomial(k);
        nlohmann::ordered_json j;
        j["k"] = k;
        auto counts = nlohmann::ordered_json::object();
        for (std::size_t e = 0; e < poly.counts.size(); ++e)
            counts["alpha=" + std::to_string(k - e)] = poly.counts[e];
        j["counts"] = std::move(counts);
        if (!c_text.empty())
            j["moment"] = rat_str(wk::eval(poly, rat_parse(c_text)));
        emit(j.dump(2) + "\n", out_path);
    } else if (recursion->parsed()) {
        auto m = offspring_model(offspring);
        Rat c = c_text.empty() ? dilute::rat(10) : rat_parse(c_text);
        nlohmann::ordered_json j;
        j["eq"] = eq;
        j["k"] = k;
        j["model"] = offspring;
        j["c"] = rat_str(c);
        j["value"] = rat_str(wk::recursion_eval(eq, k, m, c));
        if (eq == 14) {
            auto t = wk::recursion14_terms(k, m, c);
            j["terms"] = {{"t1", rat_str(t.t1)}, {"t2", rat_str(t.t2)},
                          {"t3", rat_str(t.t3)}, {"t4", rat_str(t.t4)},
                          {"t5", rat_str(t.t5)}};
        }
        emit(j.dump(2) + "\n", out_path);
    } else if (density->parsed()) {
        auto form = density_form(name, c_text, rescaled);
        if (em_opt->count() > 0) {
            emit(rat_str(ms::form_moment_exact(form, k)) + "\n", out_path);
        } else if (qm_opt->count() > 0) {
            emit(num12(ms::quadrature_moment(form, k, tol)) + "\n", out_path);
        } else if (at_opt->count() > 0) {
            emit(num12(ms::density_eval(form, at)) + "\n", out_path);
        } else {
            throw dilute::usage_error("density needs --at, --exact-moment or --quadrature");
        }
    } else if (stieltjes->parsed()) {
        if (rec_opt->count() > 0) {
            emit(num12(ms::recover_density(name, at, eps)) + "\n", out_path);
        } else {
            auto v = ms::stieltjes_eval(name, {re, im});
            emit(num12(v.real()) + " " + num12(v.imag()) + "\n", out_path);
        }
    } else if (simulate->parsed()) {
        auto t0 = std::chrono::steady_clock::now();
        auto e = lab::moment_experiment(graph_model, n, rat_parse(c_text), reps, seed,
                                        kmax, dense_limit);
        double ms_elapsed = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        nlohmann::ordered_json j;
        j["version"] = "0.1.0";
        j["model"] = graph_model;
        j["n"] = n;
        j["c"] = rat_str(rat_parse(c_text));
        j["reps"] = reps;
        j["seed"] = seed;
        j["kmax"] = kmax;
        j["mean"] = e.mean;
        j["se"] = e.se;
        j["runtime_ms"] = ms_elapsed;
        emit(j.dump(2) + "\n", out_path);
    } else if (compare->parsed()) {
        lab::ExperimentConfig cfg;
        cfg.figure = figure;
        cfg.model = graph_model;
        cfg.n = n;
        cfg.c = rat_parse(c_text);
        cfg.reps = reps;
        cfg.seed = seed;
        if (bins == 0) throw dilute::usage_error("need at least one bin");
        cfg.width = (cfg.hi - cfg.lo) / bins;
        cfg.dense_limit = dense_limit;
        cfg.kmax = kmax;
        auto res = lab::compare_report(cfg);
        if (!out_path.empty()) {
            std::ofstream f(out_path);
            if (!f) throw dilute::usage_error("cannot open output file '" + out_path + "'");
            f << lab::to_csv(res);
        }
        if (!svg_path.empty()) {
            std::ofstream f(svg_path);
            if (!f) throw dilute::usage_error("cannot open output file '" + svg_path + "'");
            f << lab::to_svg(res);
        }
        std::fputs(lab::to_json(res).c_str(), stdout);
    } else if (report_cmd->parsed()) {
        dilute::report::AcceptanceOptions opt;
        opt.seed = seed;
        opt.out_dir = out_path.empty()
                          ? std::string(".")
                          : std::filesystem::path(out_path).parent_path().string();
        if (opt.out_dir.empty()) opt.out_dir = ".";
        auto outcomes = dilute::report::run_acceptance(opt, [](const auto& o) {
            std::fprintf(stderr, "criterion %d: %s - %s\n", o.id,
                         o.pass ? "PASS" : "FAIL", o.detail.c_str());
        });
        emit(dilute::report::acceptance_json(outcomes, opt), out_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const dilute::usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
