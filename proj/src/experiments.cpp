#include "dilute/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "json.hpp"

#include "dilute/errors.hpp"

namespace dilute::lab {

namespace {

namespace ms = dilute::measures;

struct RepOutcome {
    std::vector<std::int64_t> counts;
    std::int64_t in_range = 0;
    std::int64_t total = 0;
    std::vector<double> moments;
};

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void validate_figures(const std::vector<std::string>& figures) {
    if (figures.empty()) throw usage_error("no figure requested");
    for (const auto& f : figures)
        if (f != "4L" && f != "4R" && f != "5L" && f != "5R")
            throw usage_error("unknown figure '" + f + "' (expected 4L, 4R, 5L, 5R)");
}

} // namespace

std::vector<CompareResult> compare_figures(const ExperimentConfig& base,
                                           const std::vector<std::string>& figures) {
    validate_figures(figures);
    if (base.reps == 0) throw usage_error("need at least one replicate");
    Histogram proto(base.lo, base.hi, base.width); // validates the range

    auto start = std::chrono::steady_clock::now();

    // Replicates are independent (seeded by index), so any scheduling gives
    // the same merged result; workers are capped by the dense-matrix memory.
    std::vector<RepOutcome> outcomes(base.reps);
    std::size_t mem_cap = static_cast<std::size_t>(
        std::max(1.0, 1.5e9 / (8.0 * base.n * std::max(1u, base.n))));
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>({workers, base.reps, static_cast<unsigned>(mem_cap)});
    std::atomic<unsigned> next{0};
    auto body = [&]() {
        for (;;) {
            unsigned r = next.fetch_add(1);
            if (r >= base.reps) return;
            auto g = gen_graph(base.model, base.n, base.c, rep_seed(base.seed, r));
            auto eigs = spectrum(g, base.dense_limit);
            Histogram h(base.lo, base.hi, base.width);
            h.add_all(eigs);
            outcomes[r] = RepOutcome{std::move(h.counts), h.in_range, h.total,
                                     empirical_moments(eigs, base.kmax)};
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }

    Histogram merged = proto;
    std::vector<double> mean_moments(base.kmax + 1, 0.0);
    for (const auto& o : outcomes) {
        for (std::size_t b = 0; b < merged.counts.size(); ++b) merged.counts[b] += o.counts[b];
        merged.in_range += o.in_range;
        merged.total += o.total;
        for (unsigned k = 0; k <= base.kmax; ++k) mean_moments[k] += o.moments[k];
    }
    for (auto& v : mean_moments) v /= static_cast<double>(base.reps);

    double runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();

    const double cd = rat_double(base.c);
    const Rat lam = Rat(1) + dilute::rat(1, 2) / base.c;
    auto sigma = ms::named_form("sigma");
    auto sig1 = ms::named_form("sigma1");
    auto sigma_l = ms::dilate(sigma, lam);
    auto hat1_l = ms::dilate(ms::named_form("sigma1_hat"), lam);
    auto hat2_l = ms::dilate(ms::named_form("sigma2_hat"), lam);

    std::vector<CompareResult> results;
    results.reserve(figures.size());
    for (const auto& fig : figures) {
        CompareResult res;
        res.config = base;
        res.config.figure = fig;
        res.mean_moments = mean_moments;
        res.runtime_ms = runtime_ms;
        res.rows.reserve(merged.counts.size());
        std::vector<double> ecol, tcol;
        for (std::size_t b = 0; b < merged.counts.size(); ++b) {
            BinRow row;
            row.left = merged.left(b);
            row.right = row.left + merged.width;
            double x = row.left + merged.width / 2.0;
            double emp = merged.density(b, base.n, base.reps);
            if (fig == "4L") {
                row.empirical = emp;
                row.theory = ms::density_eval(sigma, x);
            } else if (fig == "4R") {
                row.empirical = cd * (emp - ms::density_eval(sigma, x));
                row.theory = ms::density_eval(sig1, x);
            } else if (fig == "5L") {
                row.empirical = cd * (emp - ms::density_eval(sigma_l, x));
                row.theory = ms::density_eval(hat1_l, x);
            } else {
                row.empirical = cd * cd *
                                (emp - ms::density_eval(sigma_l, x) -
                                 ms::density_eval(hat1_l, x) / cd);
                row.theory = ms::density_eval(hat2_l, x);
            }
            row.diff = row.empirical - row.theory;
            res.l1 += std::abs(row.diff) * merged.width;
            ecol.push_back(row.empirical);
            tcol.push_back(row.theory);
            res.rows.push_back(row);
        }
        res.correlation = pearson(ecol, tcol);
        results.push_back(std::move(res));
    }
    return results;
}

CompareResult compare_report(const ExperimentConfig& cfg) {
    return compare_figures(cfg, {cfg.figure}).front();
}

MomentExperiment moment_experiment(const std::string& model, unsigned n, const Rat& c,
                                   unsigned reps, std::uint64_t seed, unsigned kmax,
                                   unsigned dense_limit) {
    if (reps == 0) throw usage_error("need at least one replicate");
    MomentExperiment out;
    out.reps = reps;
    out.mean.assign(kmax + 1, 0.0);
    out.se.assign(kmax + 1, 0.0);
    std::vector<double> m2(kmax + 1, 0.0); // Welford accumulators
    for (unsigned r = 0; r < reps; ++r) {
        auto g = gen_graph(model, n, c, rep_seed(seed, r));
        auto moments = empirical_moments(spectrum(g, dense_limit), kmax);
        for (unsigned k = 0; k <= kmax; ++k) {
            double delta = moments[k] - out.mean[k];
            out.mean[k] += delta / static_cast<double>(r + 1);
            m2[k] += delta * (moments[k] - out.mean[k]);
        }
    }
    if (reps > 1)
        for (unsigned k = 0; k <= kmax; ++k)
            out.se[k] = std::sqrt(m2[k] / (static_cast<double>(reps - 1) * reps));
    return out;
}

double histogram_l1(const Histogram& h, unsigned n, unsigned reps,
                    const measures::DensityForm& form) {
    double l1 = 0.0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        double x = h.left(b) + h.width / 2.0;
        l1 += std::abs(h.density(b, n, reps) - ms::density_eval(form, x)) * h.width;
    }
    return l1;
}

std::string to_csv(const CompareResult& r) {
    std::string out = "bin_left,bin_right,empirical,theory,diff\n";
    for (const auto& row : r.rows) {
        out += fmt(row.left);
        out += ',';
        out += fmt(row.right);
        out += ',';
        out += fmt(row.empirical);
        out += ',';
        out += fmt(row.theory);
        out += ',';
        out += fmt(row.diff);
        out += '\n';
    }
    return out;
}

std::string to_json(const CompareResult& r) {
    nlohmann::ordered_json j;
    j["version"] = "0.1.0";
    j["figure"] = r.config.figure;
    j["model"] = r.config.model;
    j["n"] = r.config.n;
    j["c"] = dilute::rat_str(r.config.c);
    j["reps"] = r.config.reps;
    j["seed"] = r.config.seed;
    j["lo"] = r.config.lo;
    j["hi"] = r.config.hi;
    j["bin_width"] = r.config.width;
    j["dense_limit"] = r.config.dense_limit;
    j["kmax"] = r.config.kmax;
    j["l1"] = r.l1;
    j["correlation"] = r.correlation;
    j["moments"] = r.mean_moments;
    j["runtime_ms"] = r.runtime_ms;
    return j.dump(2) + "\n";
}

std::string to_svg(const CompareResult& r) {
    const double w = 800, h = 400, mx = 45, my = 20;
    double ymin = 0, ymax = 0;
    for (const auto& row : r.rows) {
        ymin = std::min({ymin, row.empirical, row.theory});
        ymax = std::max({ymax, row.empirical, row.theory});
    }
    if (ymax == ymin) ymax = ymin + 1;
    auto xm = [&](double x) {
        return mx + (x - r.config.lo) / (r.config.hi - r.config.lo) * (w - 2 * mx);
    };
    auto ym = [&](double y) { return h - my - (y - ymin) / (ymax - ymin) * (h - 2 * my); };
    auto polyline = [&](auto pick, const char* color) {
        std::string pts;
        for (const auto& row : r.rows) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ",
                          xm(row.left + r.config.width / 2.0), ym(pick(row)));
            pts += buf;
        }
        return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    };
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" "
        "viewBox=\"0 0 800 400\">\n";
    char axis[128];
    std::snprintf(axis, sizeof axis,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#999\"/>\n",
                  xm(r.config.lo), ym(0.0), xm(r.config.hi), ym(0.0));
    svg += axis;
    svg += polyline([](const BinRow& b) { return b.empirical; }, "#888888");
    svg += polyline([](const BinRow& b) { return b.theory; }, "#000000");
    svg += "</svg>\n";
    return svg;
}

} // namespace dilute::lab
