#include "dilute/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include <lapacke.h>

#include "dilute/errors.hpp"

namespace dilute::lab {

namespace {

// Neumaier's compensated addition: unlike plain Kahan it also keeps the
// correction when the new term dominates the running sum.
void neumaier_add(double& sum, double& comp, double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
        comp += (sum - t) + v;
    else
        comp += (v - t) + sum;
    sum = t;
}

void check_er_params(unsigned n, const Rat& c) {
    if (n < 2) throw usage_error("need n >= 2");
    if (c <= 0 || c >= Rat(static_cast<long>(n)))
        throw usage_error("need 0 < c < n for erdos_renyi");
}

GraphSample er_bernoulli(unsigned n, const Rat& c, std::uint64_t seed, double p) {
    GraphSample g{n, c, "erdos_renyi", seed, {}, {}};
    Rng rng(seed);
    for (unsigned i = 0; i + 1 < n; ++i)
        for (unsigned j = i + 1; j < n; ++j)
            if (rng.next_unit() < p) g.edges.emplace_back(i, j);
    return g;
}

// Same pair order as the bernoulli walk, but jumping directly between
// accepted pairs: the gap before the next success is geometric(p).
GraphSample er_skipping(unsigned n, const Rat& c, std::uint64_t seed, double p) {
    GraphSample g{n, c, "erdos_renyi", seed, {}, {}};
    Rng rng(seed);
    const std::int64_t m_total =
        static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
    const double log_q = std::log1p(-p);
    std::int64_t pos = -1;
    unsigned row = 0;
    std::int64_t row_start = 0;
    for (;;) {
        double u = rng.next_unit();
        double jump = std::floor(std::log1p(-u) / log_q);
        if (jump >= static_cast<double>(m_total)) break;
        pos += 1 + static_cast<std::int64_t>(jump);
        if (pos >= m_total) break;
        while (pos >= row_start + static_cast<std::int64_t>(n - 1 - row)) {
            row_start += n - 1 - row;
            ++row;
        }
        unsigned col = row + 1 + static_cast<unsigned>(pos - row_start);
        g.edges.emplace_back(row, col);
    }
    return g;
}

} // namespace

GraphSample erdos_renyi(unsigned n, const Rat& c, std::uint64_t seed, ErMethod method) {
    check_er_params(n, c);
    double p = rat_double(c / Rat(static_cast<long>(n)));
    if (method == ErMethod::automatic)
        method = (p <= 0.05) ? ErMethod::skipping : ErMethod::bernoulli;
    return method == ErMethod::bernoulli ? er_bernoulli(n, c, seed, p)
                                         : er_skipping(n, c, seed, p);
}

GraphSample configuration_model(unsigned n, const std::function<unsigned(Rng&)>& degree_sampler,
                                const Rat& c, std::uint64_t seed, const std::string& label) {
    if (n < 2) throw usage_error("need n >= 2");
    if (!degree_sampler) throw usage_error("configuration model needs a degree sampler");
    GraphSample g{n, c, label, seed, {}, {}};
    Rng rng(seed);
    auto& deg = g.sampled_degrees;
    deg.resize(n);
    std::size_t total = 0;
    for (unsigned i = 0; i < n; ++i) {
        deg[i] = degree_sampler(rng);
        total += deg[i];
    }
    if (total > 50'000'000) throw resource_error("degree sum too large for pairing");
    if (total % 2 != 0) {
        ++deg[n - 1];
        ++total;
    }
    std::vector<unsigned> half;
    half.reserve(total);
    for (unsigned i = 0; i < n; ++i) half.insert(half.end(), deg[i], i);
    rng.shuffle(half);
    // Erasure: loops dropped, parallels merged. Doing both through one
    // sort+unique pass lands on the same simple graph either way.
    auto& edges = g.edges;
    edges.reserve(total / 2);
    for (std::size_t t = 0; t + 1 < half.size(); t += 2) {
        unsigned a = half[t], b = half[t + 1];
        if (a == b) continue;
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return g;
}

GraphSample random_regular(unsigned n, unsigned degree, std::uint64_t seed) {
    if (degree == 0 || degree >= n)
        throw usage_error("regular model needs an integer degree in [1, n)");
    auto g = configuration_model(
        n, [degree](Rng&) { return degree; }, Rat(static_cast<long>(degree)), seed,
        "regular");
    return g;
}

GraphSample gen_graph(const std::string& model, unsigned n, const Rat& c,
                      std::uint64_t seed) {
    if (model == "erdos_renyi") return erdos_renyi(n, c, seed);
    if (model == "regular") {
        if (c.get_den() != 1 || c <= 0)
            throw usage_error("regular model needs a positive integer c");
        return random_regular(n, static_cast<unsigned>(c.get_num().get_ui()), seed);
    }
    if (model == "configuration")
        throw usage_error("configuration model needs an explicit degree sampler");
    throw usage_error("unknown model '" + model +
                      "' (expected erdos_renyi or regular)");
}

std::vector<double> spectrum(const GraphSample& g, unsigned dense_limit) {
    if (g.n > dense_limit)
        throw resource_error("n = " + std::to_string(g.n) +
                             " exceeds the dense spectrum limit " +
                             std::to_string(dense_limit) +
                             "; moment-level reports work without a spectrum");
    if (g.c <= 0) throw dilute::domain_error("need c > 0 to rescale the adjacency matrix");
    const std::size_t n = g.n;
    if (n == 0) return {};
    const double scale = 1.0 / std::sqrt(rat_double(g.c));
    std::vector<double> a(n * n, 0.0);
    for (const auto& [i, j] : g.edges) {
        a[i + j * n] = scale;
        a[j + i * n] = scale;
    }
    std::vector<double> w(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L',
                                     static_cast<lapack_int>(n), a.data(),
                                     static_cast<lapack_int>(n), w.data());
    if (info != 0)
        throw accuracy_error("dense eigensolver failed (info " + std::to_string(info) + ")",
                             static_cast<double>(info));
    return w;
}

std::vector<double> empirical_moments(const std::vector<double>& eigs, unsigned kmax) {
    if (kmax > 12) throw usage_error("moment order capped at 12");
    if (eigs.empty()) throw usage_error("no eigenvalues given");
    std::vector<double> sum(kmax + 1, 0.0), comp(kmax + 1, 0.0);
    for (double lambda : eigs) {
        double p = 1.0;
        for (unsigned k = 0; k <= kmax; ++k) {
            neumaier_add(sum[k], comp[k], p);
            p *= lambda;
        }
    }
    for (unsigned k = 0; k <= kmax; ++k)
        sum[k] = (sum[k] + comp[k]) / static_cast<double>(eigs.size());
    return sum;
}

Histogram::Histogram(double lo_, double hi_, double width_) : lo(lo_), hi(hi_), width(width_) {
    if (!(width > 0.0) || !(hi > lo)) throw usage_error("bad histogram range");
    auto nb = static_cast<std::size_t>(std::llround((hi - lo) / width));
    if (nb == 0) throw usage_error("histogram needs at least one bin");
    counts.assign(nb, 0);
}

void Histogram::add(double x) {
    ++total;
    double offset = (x - lo) / width;
    if (offset < 0.0) return;
    auto b = static_cast<std::size_t>(offset);
    if (b >= counts.size()) return;
    ++counts[b];
    ++in_range;
}

void Histogram::add_all(const std::vector<double>& xs) {
    for (double x : xs) add(x);
}

double Histogram::density(std::size_t b, unsigned n, unsigned reps) const {
    return static_cast<double>(counts[b]) /
           (static_cast<double>(n) * static_cast<double>(reps) * width);
}

} // namespace dilute::lab
