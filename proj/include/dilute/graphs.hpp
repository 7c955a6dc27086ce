#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dilute/rational.hpp"
#include "dilute/rng.hpp"

namespace dilute::lab {

using dilute::Rat;

// A simple graph (no loops, no parallel edges) with its generation record.
struct GraphSample {
    unsigned n = 0;
    Rat c = 0;
    std::string model;
    std::uint64_t seed = 0;
    std::vector<std::pair<unsigned, unsigned>> edges; // (i, j) with i < j
    // Pre-erasure degree sequence (configuration family only), after the
    // odd-total adjustment; empty for erdos_renyi.
    std::vector<unsigned> sampled_degrees;
};

enum class ErMethod {
    automatic, // skipping when c/n is small, bernoulli otherwise
    bernoulli, // one uniform draw per vertex pair
    skipping,  // geometric jumps between accepted pairs
};

// G(n, c/n): every pair independently present with probability c/n. The two
// sampling methods draw from the same distribution and are cross-tested.
GraphSample erdos_renyi(unsigned n, const Rat& c, std::uint64_t seed,
                        ErMethod method = ErMethod::automatic);

// Half-edge pairing: sample a degree per vertex, bump the last degree by one
// if the total is odd, match half-edges by a uniform shuffle, then make the
// multigraph simple (drop loops, merge parallel edges).
GraphSample configuration_model(unsigned n, const std::function<unsigned(Rng&)>& degree_sampler,
                                const Rat& c, std::uint64_t seed,
                                const std::string& label = "configuration");

// Configuration model with constant degree; the result has degree <= degree
// after erasure (exactly regular up to the few erased collisions).
GraphSample random_regular(unsigned n, unsigned degree, std::uint64_t seed);

// Dispatcher on the model tag: erdos_renyi | regular (configuration needs an
// explicit sampler and has no name-only form).
GraphSample gen_graph(const std::string& model, unsigned n, const Rat& c,
                      std::uint64_t seed);

// Eigenvalues of A/sqrt(c), ascending. Dense symmetric solve; n above the
// limit raises resource_error (moment-level reports stay available at any n
// through the closed-form side, which never touches a spectrum).
std::vector<double> spectrum(const GraphSample& g, unsigned dense_limit = 4000);

// m_k = (1/n) sum lambda^k for k = 0..kmax (kmax <= 12), compensated sums.
std::vector<double> empirical_moments(const std::vector<double>& eigs, unsigned kmax);

// Fixed uniform binning; counts are exact integers, densities divide by
// n * reps * width so one replicate integrates to its in-range fraction.
struct Histogram {
    double lo = -3.5;
    double hi = 3.5;
    double width = 0.05;
    std::vector<std::int64_t> counts;
    std::int64_t in_range = 0;
    std::int64_t total = 0;

    Histogram(double lo_, double hi_, double width_);
    static Histogram standard() { return Histogram(-3.5, 3.5, 0.05); }

    std::size_t bins() const { return counts.size(); }
    double left(std::size_t b) const { return lo + static_cast<double>(b) * width; }
    void add(double x);
    void add_all(const std::vector<double>& xs);
    double density(std::size_t b, unsigned n, unsigned reps) const;
};

} // namespace dilute::lab
