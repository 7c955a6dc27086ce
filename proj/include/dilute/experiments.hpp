#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dilute/graphs.hpp"
#include "dilute/measures.hpp"

namespace dilute::lab {

// One Monte Carlo run of the figure pipeline. Figures share the convention
// of the source plots: a histogram of the empirical spectral measure is
// compared, bin by bin, against a closed-form density, after recentring and
// scaling by a power of c:
//   4L  mu_n                                        vs sigma
//   4R  c (mu_n - sigma)                            vs sigma1
//   5L  c (mu_n - L sigma)                          vs L sigma1_hat
//   5R  c^2 (mu_n - L sigma - (1/c) L sigma1_hat)   vs L sigma2_hat
// where L dilates by 1 + 1/(2c).
struct ExperimentConfig {
    std::string figure = "4L";
    std::string model = "erdos_renyi";
    unsigned n = 10000;
    Rat c = 20;
    unsigned reps = 100;
    std::uint64_t seed = 1;
    double lo = -3.5;
    double hi = 3.5;
    double width = 0.05;
    unsigned dense_limit = 8000;
    unsigned kmax = 8;
};

struct BinRow {
    double left = 0, right = 0, empirical = 0, theory = 0, diff = 0;
};

struct CompareResult {
    ExperimentConfig config;
    std::vector<BinRow> rows;
    double l1 = 0;
    double correlation = 0;
    std::vector<double> mean_moments;
    double runtime_ms = 0;
};

// Runs the replicates once and renders every requested figure from the same
// spectra (the figures differ only in the per-bin transformation).
std::vector<CompareResult> compare_figures(const ExperimentConfig& base,
                                           const std::vector<std::string>& figures);
CompareResult compare_report(const ExperimentConfig& cfg);

// Replicated moment estimates: mean and standard error of m_k over reps.
struct MomentExperiment {
    std::vector<double> mean;
    std::vector<double> se;
    unsigned reps = 0;
};
MomentExperiment moment_experiment(const std::string& model, unsigned n, const Rat& c,
                                   unsigned reps, std::uint64_t seed, unsigned kmax,
                                   unsigned dense_limit = 4000);

// L1 distance between a histogram (normalized over n * reps) and a density,
// evaluated at bin midpoints.
double histogram_l1(const Histogram& h, unsigned n, unsigned reps,
                    const measures::DensityForm& form);

// CSV rows bin_left,bin_right,empirical,theory,diff with a header line.
std::string to_csv(const CompareResult& r);
// Full resolved config plus summary; runtime_ms sits on its own line so
// reproducibility comparisons can strip it.
std::string to_json(const CompareResult& r);
// Minimal polyline overlay of the empirical and theory columns.
std::string to_svg(const CompareResult& r);

} // namespace dilute::lab
