#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dilute/expansion.hpp"

namespace dilute::walks {

using dilute::Rat;
using expansion::FactorialMomentModel;

inline constexpr unsigned default_k_max = 8;

// Closed walks of length 2k started at the root of a growing rooted tree.
// Moves: -1 steps up to the parent, -2 creates and enters a fresh child,
// j >= 0 re-enters existing child j. Children are numbered by first visit,
// so every walk on an unordered tree is generated exactly once.
struct WalkHistory {
    unsigned k = 0;
    std::vector<int> moves;
    // Traversal count of the edge above each non-root vertex, vertices in
    // first-visit order. Closed walks on trees cross every edge an even
    // number of times, so each entry is even and at least 2.
    std::vector<unsigned> multiplicities;
    // Number of distinct children visited, per vertex in first-visit order;
    // entry 0 is the root.
    std::vector<unsigned> child_counts;
    unsigned alpha = 0; // distinct edges

    enum class LoopType : std::uint8_t { zero, one, two, one_one, higher };
    LoopType loop_type = LoopType::zero;
};

using LoopType = WalkHistory::LoopType;

// Streams every canonical closed walk of length 2k exactly once. Depth-first
// generation; branches that cannot return to the root in the remaining steps
// are pruned before they are entered.
void enumerate_histories(unsigned k,
                         const std::function<void(const WalkHistory&)>& visit,
                         unsigned k_max = default_k_max);

// m_{2k} as an exact polynomial in 1/c for the mean-c Poisson offspring law:
// counts[e] histories have k - e distinct edges and weight c^{-e} each.
struct MomentPolynomial {
    unsigned k = 0;
    std::vector<unsigned long long> counts; // index e = 0 .. k-1
};

MomentPolynomial moment_polynomial(unsigned k, unsigned k_max = default_k_max);
Rat eval(const MomentPolynomial& poly, const Rat& c);

// 1/c^2 coefficients of the moment polynomials, k = 0 .. order-1. This is
// the enumeration-side source for the second-order coefficient table.
std::vector<Rat> d_oracle_values(std::size_t order, unsigned k_max = default_k_max);

// Which law weighs the root's child count: the offspring law p itself, or
// the size-biased child law q. Subtree vertices always use q.
enum class RootLaw { ugw_p, gw_q };

// Exact 2k-th moment of the limiting spectral measure of the random tree
// with root law p and child law q: sum over histories of
// FM_{l_root}(p) prod_{v != root} FM_{l_v}(q), scaled by c^{-k}.
Rat exact_moment(unsigned k, const FactorialMomentModel& model, const Rat& c,
                 unsigned k_max = default_k_max);

// Same weighting restricted to one loop class.
Rat loop_expectation(unsigned k, LoopType type, RootLaw law,
                     const FactorialMomentModel& model, const Rat& c,
                     unsigned k_max = default_k_max);

// Ordered pairs (first loop of type t1, second of type t2) with disjoint
// edge sets under a common root, total length 2k. The root factor for a
// pair using l1 and l2 first-generation vertices is FM_{l1+l2}.
Rat pair_expectation(unsigned k, LoopType t1, LoopType t2, RootLaw law,
                     const FactorialMomentModel& model, const Rat& c,
                     unsigned k_max = default_k_max);

// Ordered disjoint triples of 0-loops of total length 2k.
Rat triple_zero_expectation(unsigned k, RootLaw law,
                            const FactorialMomentModel& model, const Rat& c,
                            unsigned k_max = default_k_max);

// The loop-count recursions, transcribed from their displayed forms and
// evaluated bottom-up in exact rationals. Identifiers:
//   6   0-loops, root weighted by p
//   7   0-loops, root weighted by q
//   8   1-loops, root weighted by p
//   9   ordered disjoint 0-loop pairs
//   10  1-loops, root weighted by q
//   13  2-loops
//   14  (1,1)-loops
//   15  ordered disjoint (1-loop, 0-loop) pairs
// Identifiers 13-15 are stated in the source material for the Poisson law,
// where p = q; child_law selects how they extend to other models (every
// inner quantity they reference is a q-law object, so q is the default).
enum class ChildLawReading { q_law, p_law };

Rat recursion_eval(int eq, unsigned k, const FactorialMomentModel& model,
                   const Rat& c, ChildLawReading reading = ChildLawReading::q_law,
                   unsigned k_max = default_k_max);

// Per-term breakdown of recursion 14, in display order: subtree (1,1)-loop,
// two subtree 1-loops, root quadruple edge over a mixed pair, root quadruple
// edge with a 1-loop aside, two root quadruple edges.
struct Recursion14Terms {
    Rat t1, t2, t3, t4, t5;
    Rat total() const { return t1 + t2 + t3 + t4 + t5; }
};

Recursion14Terms recursion14_terms(unsigned k, const FactorialMomentModel& model,
                                   const Rat& c,
                                   ChildLawReading reading = ChildLawReading::q_law);

// Residuals of the moment expansion through order 1/c against the exact
// tree moments, scaled by c^2 to exhibit the claimed order of the error.
struct ExpansionCheckRow {
    Rat c;
    Rat exact;
    Rat predicted;
    Rat residual;
    double residual_times_c2 = 0.0;
};

struct ExpansionCheck {
    unsigned k = 0;
    std::vector<ExpansionCheckRow> rows;
    double scaled_min = 0.0;
    double scaled_max = 0.0;
    // Largest relative spread of the scaled residuals; small values mean the
    // error really is of order 1/c^2.
    double spread() const;
};

ExpansionCheck expansion_check(unsigned k, const FactorialMomentModel& model,
                               const std::vector<Rat>& c_values,
                               unsigned k_max = default_k_max);

} // namespace dilute::walks
