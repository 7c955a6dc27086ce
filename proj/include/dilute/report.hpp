#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dilute::report {

// Verdict for one acceptance criterion: a one-line summary of the measured
// values plus any emitted tables (discrepancy reports, figure summaries) as
// preformatted lines.
struct CriterionOutcome {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    std::vector<std::string> lines;
    double runtime_ms = 0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 1; // master seed for every Monte Carlo criterion
    std::string out_dir;    // when set, figure CSVs are written there
};

// Runs the ten-part acceptance battery in order. on_done fires after each
// criterion finishes so callers can stream progress; the slow criteria are
// the Monte Carlo ones near the end.
std::vector<CriterionOutcome> run_acceptance(
    const AcceptanceOptions& opt = {},
    const std::function<void(const CriterionOutcome&)>& on_done = {});

bool all_pass(const std::vector<CriterionOutcome>& outcomes);

// JSON document with one entry per criterion plus the resolved options.
std::string acceptance_json(const std::vector<CriterionOutcome>& outcomes,
                            const AcceptanceOptions& opt);

} // namespace dilute::report
