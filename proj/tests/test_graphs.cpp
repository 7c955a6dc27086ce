#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/experiments.hpp"
#include "dilute/graphs.hpp"
#include "dilute/measures.hpp"
#include "dilute/rng.hpp"

using dilute::Rat;
using dilute::rat;
namespace lab = dilute::lab;

namespace {

bool is_simple(const lab::GraphSample& g) {
    std::set<std::pair<unsigned, unsigned>> seen;
    for (const auto& [a, b] : g.edges) {
        if (a >= b) return false;         // normalized order, no loops
        if (b >= g.n) return false;       // indices in range
        if (!seen.insert({a, b}).second) return false;
    }
    return true;
}

std::vector<unsigned> degrees_of(const lab::GraphSample& g) {
    std::vector<unsigned> d(g.n, 0);
    for (const auto& [a, b] : g.edges) {
        ++d[a];
        ++d[b];
    }
    return d;
}

} // namespace

TEST_CASE("generator primitives are pinned and bias-free") {
    // The engine transition is the standard-mandated one: the 10000th output
    // of a default-seeded mt19937_64 is fixed by the C++ standard.
    lab::Rng ref(5489);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = ref.next_u64();
    CHECK(v == 9981545732273789042ULL);

    // Reference value of the splitmix64 finalizer at 0.
    CHECK(lab::splitmix64(0) == 16294208416658607535ULL);

    // Replicate seeds are pairwise distinct.
    std::set<std::uint64_t> seeds;
    for (unsigned r = 0; r < 200; ++r) seeds.insert(lab::rep_seed(42, r));
    CHECK(seeds.size() == 200);

    lab::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    std::set<std::uint64_t> residues;
    for (int i = 0; i < 500; ++i) {
        auto r = rng.below(7);
        CHECK(r < 7);
        residues.insert(r);
    }
    CHECK(residues.size() == 7);

    std::vector<int> perm(50);
    std::iota(perm.begin(), perm.end(), 0);
    lab::Rng a(11), b(11);
    auto p1 = perm, p2 = perm;
    a.shuffle(p1);
    b.shuffle(p2);
    CHECK(p1 == p2);
    CHECK(p1 != perm);
    std::sort(p1.begin(), p1.end());
    CHECK(p1 == perm);
}

TEST_CASE("erdos-renyi sampling is valid, deterministic and method-agnostic") {
    auto g = lab::erdos_renyi(60, 5, 123);
    CHECK(g.n == 60);
    CHECK(is_simple(g));
    auto g2 = lab::erdos_renyi(60, 5, 123);
    CHECK(g.edges == g2.edges);
    auto g3 = lab::erdos_renyi(60, 5, 124);
    CHECK(g.edges != g3.edges);

    // Mean edge count over many seeds: E|E| = C(n,2) c/n = 3 at n=4, c=2,
    // for both sampling routes.
    for (auto method : {lab::ErMethod::bernoulli, lab::ErMethod::skipping}) {
        double total = 0.0, total_sq = 0.0;
        const int runs = 2000;
        for (int s = 0; s < runs; ++s) {
            auto h = lab::erdos_renyi(4, 2, 1000 + s, method);
            CHECK(is_simple(h));
            auto m = static_cast<double>(h.edges.size());
            total += m;
            total_sq += m * m;
        }
        double mean = total / runs;
        double var = total_sq / runs - mean * mean;
        CHECK(std::abs(mean - 3.0) <= 0.15);
        CHECK(std::abs(var - 1.5) <= 0.3); // binomial(6, 1/2) variance
    }

    // Sparse regime: the skipping route must agree with bernoulli in mean.
    {
        double mean_b = 0.0, mean_s = 0.0;
        const int runs = 400;
        for (int s = 0; s < runs; ++s) {
            mean_b += static_cast<double>(
                lab::erdos_renyi(200, 3, 5000 + s, lab::ErMethod::bernoulli).edges.size());
            mean_s += static_cast<double>(
                lab::erdos_renyi(200, 3, 9000 + s, lab::ErMethod::skipping).edges.size());
        }
        mean_b /= runs;
        mean_s /= runs;
        double expected = 199.0 * 3.0 / 2.0; // C(n,2) c/n
        CHECK(std::abs(mean_b - expected) <= 3.0);
        CHECK(std::abs(mean_s - expected) <= 3.0);
    }

    CHECK_THROWS_AS(lab::erdos_renyi(1, rat(1, 2), 0), dilute::usage_error);
    CHECK_THROWS_AS(lab::erdos_renyi(10, 0, 0), dilute::usage_error);
    CHECK_THROWS_AS(lab::erdos_renyi(10, 10, 0), dilute::usage_error);
}

TEST_CASE("configuration model applies parity rule and erasure") {
    auto even = lab::configuration_model(
        6, [](lab::Rng&) { return 2u; }, 2, 77);
    CHECK(even.sampled_degrees == std::vector<unsigned>{2, 2, 2, 2, 2, 2});
    CHECK(is_simple(even));

    // Odd total degree bumps the last vertex by one.
    auto odd = lab::configuration_model(
        5, [](lab::Rng&) { return 3u; }, 3, 78);
    CHECK(odd.sampled_degrees == std::vector<unsigned>{3, 3, 3, 3, 4});
    CHECK(is_simple(odd));

    // Erasure can only lower degrees below the sampled ones.
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto g = lab::configuration_model(
            30, [](lab::Rng&) { return 4u; }, 4, 100 + s);
        CHECK(is_simple(g));
        auto d = degrees_of(g);
        for (unsigned i = 0; i < g.n; ++i) CHECK(d[i] <= g.sampled_degrees[i]);
    }

    CHECK_THROWS_AS(lab::configuration_model(6, nullptr, 2, 0), dilute::usage_error);
}

TEST_CASE("random regular graphs are near-regular after erasure") {
    auto g = lab::random_regular(500, 20, 31);
    CHECK(is_simple(g));
    auto d = degrees_of(g);
    unsigned exact = 0;
    double mean = 0.0;
    for (unsigned i = 0; i < g.n; ++i) {
        CHECK(d[i] <= 20);
        if (d[i] == 20) ++exact;
        mean += d[i];
    }
    mean /= g.n;
    // Pairing collisions scale like (d-1)^2/4 merged pairs, so most vertices
    // stay exactly regular and the mean degree barely moves.
    CHECK(exact >= 250);
    CHECK(mean >= 19.0);

    CHECK_THROWS_AS(lab::random_regular(10, 0, 0), dilute::usage_error);
    CHECK_THROWS_AS(lab::random_regular(10, 10, 0), dilute::usage_error);
}

TEST_CASE("gen_graph dispatches on the model tag") {
    auto g = lab::gen_graph("erdos_renyi", 50, 4, 9);
    CHECK(g.model == "erdos_renyi");
    CHECK(g.edges == lab::erdos_renyi(50, 4, 9).edges);

    auto r = lab::gen_graph("regular", 50, 3, 9);
    CHECK(r.model == "regular");
    CHECK(r.edges == lab::random_regular(50, 3, 9).edges);

    CHECK_THROWS_AS(lab::gen_graph("regular", 50, rat(5, 2), 9), dilute::usage_error);
    CHECK_THROWS_AS(lab::gen_graph("configuration", 50, 3, 9), dilute::usage_error);
    CHECK_THROWS_AS(lab::gen_graph("petersen", 50, 3, 9), dilute::usage_error);
}

TEST_CASE("spectrum matches known eigenvalues and trace identities") {
    lab::GraphSample tri;
    tri.n = 3;
    tri.c = 2;
    tri.model = "fixed";
    tri.edges = {{0, 1}, {0, 2}, {1, 2}};
    auto eig = lab::spectrum(tri);
    REQUIRE(eig.size() == 3);
    double s = 1.0 / std::sqrt(2.0);
    CHECK(eig[0] == doctest::Approx(-s).epsilon(1e-10));
    CHECK(eig[1] == doctest::Approx(-s).epsilon(1e-10));
    CHECK(eig[2] == doctest::Approx(2.0 * s).epsilon(1e-10));

    auto g = lab::erdos_renyi(200, 5, 4242);
    auto lam = lab::spectrum(g);
    REQUIRE(lam.size() == 200);
    CHECK(std::is_sorted(lam.begin(), lam.end()));
    double sum = 0.0, sum_sq = 0.0;
    for (double x : lam) {
        sum += x;
        sum_sq += x * x;
    }
    CHECK(std::abs(sum) <= 1e-8 * 200);
    double expected_sq = 2.0 * static_cast<double>(g.edges.size()) / 5.0;
    CHECK(std::abs(sum_sq - expected_sq) <= 1e-6);

    // Deterministic end to end.
    CHECK(lab::spectrum(lab::erdos_renyi(200, 5, 4242)) == lam);

    CHECK_THROWS_AS(lab::spectrum(g, 100), dilute::resource_error);
    lab::GraphSample bad = tri;
    bad.c = 0;
    CHECK_THROWS_AS(lab::spectrum(bad), dilute::domain_error);
}

TEST_CASE("empirical moments are compensated and exact on known spectra") {
    std::vector<double> eigs = {1.0, -1.0};
    auto m = lab::empirical_moments(eigs, 6);
    REQUIRE(m.size() == 7);
    CHECK(m[0] == 1.0);
    CHECK(m[1] == 0.0);
    CHECK(m[2] == 1.0);
    CHECK(m[3] == 0.0);
    CHECK(m[6] == 1.0);

    // Kahan keeps the small summand that plain accumulation drops.
    std::vector<double> harsh = {1e16, 1.0, -1e16};
    auto hm = lab::empirical_moments(harsh, 1);
    CHECK(hm[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // m_2 equals 2|E|/(n c) through the spectrum, tying solver and graph.
    auto g = lab::erdos_renyi(300, 6, 777);
    auto mm = lab::empirical_moments(lab::spectrum(g), 4);
    double m2 = 2.0 * static_cast<double>(g.edges.size()) / (300.0 * 6.0);
    CHECK(mm[2] == doctest::Approx(m2).epsilon(1e-9));

    CHECK_THROWS_AS(lab::empirical_moments(eigs, 13), dilute::usage_error);
    CHECK_THROWS_AS(lab::empirical_moments({}, 2), dilute::usage_error);
}

TEST_CASE("histogram bins, normalization and range handling") {
    auto h = lab::Histogram::standard();
    CHECK(h.bins() == 140);
    CHECK(h.left(0) == doctest::Approx(-3.5));
    CHECK(h.left(70) == doctest::Approx(0.0));

    h.add(-3.5);  // lowest bin, inclusive left edge
    h.add(0.01);  // bin 70
    h.add(3.49);  // last bin
    h.add(3.5);   // at the right edge: out of range
    h.add(-4.0);  // below range
    CHECK(h.total == 5);
    CHECK(h.in_range == 3);
    CHECK(h.counts[0] == 1);
    CHECK(h.counts[70] == 1);
    CHECK(h.counts[139] == 1);

    // One replicate of n values integrates to in_range/n.
    lab::Histogram unit(0.0, 1.0, 0.25);
    unit.add_all({0.1, 0.3, 0.6, 0.9, 2.0});
    double integral = 0.0;
    for (std::size_t b = 0; b < unit.bins(); ++b)
        integral += unit.density(b, 5, 1) * unit.width;
    CHECK(integral == doctest::Approx(4.0 / 5.0).epsilon(1e-12));

    CHECK_THROWS_AS(lab::Histogram(0.0, 1.0, 0.0), dilute::usage_error);
    CHECK_THROWS_AS(lab::Histogram(1.0, 0.0, 0.1), dilute::usage_error);
}

TEST_CASE("figure pipeline: determinism, shared spectra and error handling") {
    lab::ExperimentConfig cfg;
    cfg.model = "erdos_renyi";
    cfg.n = 500;
    cfg.c = 10;
    cfg.reps = 4;
    cfg.seed = 7;
    cfg.kmax = 6;
    cfg.dense_limit = 1000;

    auto both = lab::compare_figures(cfg, {"4L", "4R"});
    REQUIRE(both.size() == 2);
    const auto& fl = both[0];
    const auto& fr = both[1];
    CHECK(fl.config.figure == "4L");
    CHECK(fr.config.figure == "4R");
    REQUIRE(fl.rows.size() == 140);
    REQUIRE(fr.rows.size() == 140);

    // Both figures are rendered from the same merged histogram, so the 4R
    // empirical column is exactly c * (4L empirical - sigma) bin by bin.
    auto sigma = dilute::measures::named_form("sigma");
    for (std::size_t b = 0; b < fl.rows.size(); ++b) {
        double x = fl.rows[b].left + cfg.width / 2.0;
        double back = 10.0 * (fl.rows[b].empirical - dilute::measures::density_eval(sigma, x));
        CHECK(std::abs(back - fr.rows[b].empirical) <= 1e-12);
    }

    // The leading-order figure tracks the semicircle closely even at this
    // small size; the empirical and theory columns line up bin by bin.
    CHECK(fl.l1 < 0.25);
    CHECK(fl.correlation > 0.95);

    // Mean moments ride along: m_0 = 1 and m_2 near 1 after the 1/sqrt(c)
    // rescaling (exactly 2|E|/(n c) per replicate).
    REQUIRE(fl.mean_moments.size() == 7);
    CHECK(fl.mean_moments[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fl.mean_moments[2] - 1.0) < 0.05);
    CHECK(fl.mean_moments == fr.mean_moments);

    // Identical config reproduces every column and summary statistic.
    auto again = lab::compare_report(cfg);
    REQUIRE(again.rows.size() == fl.rows.size());
    for (std::size_t b = 0; b < fl.rows.size(); ++b) {
        CHECK(again.rows[b].empirical == fl.rows[b].empirical);
        CHECK(again.rows[b].theory == fl.rows[b].theory);
    }
    CHECK(again.l1 == fl.l1);
    CHECK(again.correlation == fl.correlation);

    CHECK_THROWS_AS(lab::compare_figures(cfg, {"6Q"}), dilute::usage_error);
    CHECK_THROWS_AS(lab::compare_figures(cfg, {}), dilute::usage_error);
    lab::ExperimentConfig zero = cfg;
    zero.reps = 0;
    CHECK_THROWS_AS(lab::compare_figures(zero, {"4L"}), dilute::usage_error);
}

TEST_CASE("replicated moment experiment matches a direct two-pass computation") {
    const unsigned n = 300, reps = 5, kmax = 4;
    const Rat c = 4;
    const std::uint64_t seed = 11;

    auto exp = lab::moment_experiment("erdos_renyi", n, c, reps, seed, kmax);
    REQUIRE(exp.mean.size() == kmax + 1);
    REQUIRE(exp.se.size() == kmax + 1);
    CHECK(exp.reps == reps);

    // Recompute mean and standard error directly from the per-replicate
    // moment vectors (same seed stream).
    std::vector<std::vector<double>> per_rep;
    for (unsigned r = 0; r < reps; ++r) {
        auto g = lab::gen_graph("erdos_renyi", n, c, lab::rep_seed(seed, r));
        per_rep.push_back(lab::empirical_moments(lab::spectrum(g), kmax));
    }
    for (unsigned k = 0; k <= kmax; ++k) {
        double mean = 0;
        for (const auto& m : per_rep) mean += m[k];
        mean /= reps;
        double ss = 0;
        for (const auto& m : per_rep) ss += (m[k] - mean) * (m[k] - mean);
        double se = std::sqrt(ss / ((reps - 1.0) * reps));
        CHECK(std::abs(exp.mean[k] - mean) <= 1e-13);
        CHECK(std::abs(exp.se[k] - se) <= 1e-13);
    }

    CHECK(exp.mean[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(exp.mean[2] - 1.0) < 0.1);

    auto single = lab::moment_experiment("erdos_renyi", n, c, 1, seed, kmax);
    for (unsigned k = 0; k <= kmax; ++k) CHECK(single.se[k] == 0.0);
    CHECK_THROWS_AS(lab::moment_experiment("erdos_renyi", n, c, 0, seed, kmax),
                    dilute::usage_error);
}

TEST_CASE("histogram distance and the textual renderings of a comparison") {
    // An empty histogram is at L1 distance ~mass from any density on the
    // window (the midpoint rule leaves only a tiny discretization gap).
    auto empty = lab::Histogram::standard();
    double d = lab::histogram_l1(empty, 100, 1, dilute::measures::semicircle());
    CHECK(std::abs(d - 1.0) < 0.01);

    lab::ExperimentConfig cfg;
    cfg.n = 400;
    cfg.c = 8;
    cfg.reps = 2;
    cfg.seed = 3;
    cfg.kmax = 2;
    cfg.dense_limit = 800;
    auto res = lab::compare_report(cfg);

    auto csv = lab::to_csv(res);
    REQUIRE(csv.rfind("bin_left,bin_right,empirical,theory,diff\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 141);
    CHECK(csv.find("\n-3.5,-3.45,") != std::string::npos);

    auto json_text = lab::to_json(res);
    CHECK(json_text.find("\"version\": \"0.1.0\"") != std::string::npos);
    CHECK(json_text.find("\"figure\": \"4L\"") != std::string::npos);
    CHECK(json_text.find("\"c\": \"8\"") != std::string::npos);
    CHECK(json_text.find("\"kmax\": 2") != std::string::npos);
    // runtime_ms sits alone on the final entry line so reproducibility
    // comparisons can strip it with a line-oriented filter.
    auto pos = json_text.find("\"runtime_ms\"");
    REQUIRE(pos != std::string::npos);
    CHECK(json_text.rfind("\n", pos) != std::string::npos);
    auto line_start = json_text.rfind('\n', pos) + 1;
    auto line_end = json_text.find('\n', pos);
    auto line = json_text.substr(line_start, line_end - line_start);
    CHECK(line.find("runtime_ms") != std::string::npos);
    CHECK(line.find("l1") == std::string::npos);

    auto svg = lab::to_svg(res);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(std::count(svg.begin(), svg.end(), '<') >= 4);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
}
