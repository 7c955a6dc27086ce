#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dilute/series.hpp"

namespace dilute::expansion {

using dilute::Rat;
using qs::Series;

// The generating functions of the 1/c expansion of the limiting spectral
// measure. Names accepted by named_series:
//
//   S1, B1     x^2 (2x T' T^3 + T^4), the 1/c correction moments
//   B1_tilde   x^2 T^5 / (1 - x T^2)          (equal to B1; kept separate
//                                              so the equality is testable)
//   B1_2       2 x^2 T^6 / (1 - x T^2)        (ordered mixed loop pairs)
//   A0_2       T^2                            (ordered disjoint loop pairs)
//   A0_3       T^3                            (ordered disjoint loop triples)
//   D2         x^3 T^7 / (1 - x T^2)
//   D11        x^4 T^9 (8 - 11 x T^2 + 4 x^2 T^4) / (1 - x T^2)^3
//   D          x^3 T^7 (1 + 6 x T^2 - 10 x^2 T^4 + 4 x^3 T^6) / (1 - x T^2)^3
//   B_hat      B1 - x T'
//   D_hat      D - 2a x B1' + 2a^2 x^2 T'' + 3a^2 x T'   with a = 1/2
//   B0         2 F(x T) / (1 - x T^2)         (requires f_series)
//   B0_tilde   F(x T) / (x T (1 - x T^2))     (requires f_series; consumes
//                                              one order of the window)
Series named_series(const std::string& name, std::size_t order,
                    const Series* f_series = nullptr);

// The 1/c correction moments from the direct finite sum
//   coeff k = sum_{p1+p2+p3+p4 = k-2} (2 p1 + 1) Cat(p1) Cat(p2) Cat(p3) Cat(p4),
// an independent route that must agree with named_series("S1").
Series s1_combinatorial(std::size_t order);

// D_hat with an explicit dilation parameter. The final term of the closed
// form reads 3a^2 x T'; passing last_term_alpha_squared = false evaluates the
// alternative reading 3a x T' so both can be compared against the moment
// formula d_hat_k = d_k - 2 k a b_k + k (2k+1) a^2 Cat(k).
Series d_hat_series(std::size_t order, const Rat& dilation_alpha,
                    bool last_term_alpha_squared);

// Offspring-law descriptor through exact factorial moments FM_l(p(c)) plus
// the concentration data (exponent and correction series) used by the
// asymptotic checks. fm may be empty for families described only by their
// asymptotics; exact queries then raise unsupported_error.
struct FactorialMomentModel {
    std::string name;
    std::function<Rat(unsigned long l, const Rat& c)> fm;
    // Scale c^{-conc_exponent} of the leading factorial-moment correction.
    std::optional<Rat> conc_exponent;
    // F(x) = sum_k f(k) x^k at scale c^{-conc_exponent}; empty means zero.
    std::function<Series(std::size_t)> f_alpha;
    // Additional correction at scale 1/c beyond the universal one (used by
    // the two-scale family); empty means zero.
    std::function<Series(std::size_t)> f_extra_c1;

    bool exact() const { return static_cast<bool>(fm); }
    // FM_l of the offspring law itself.
    Rat fm_p(unsigned long l, const Rat& c) const;
    // FM_l of the size-biased child law q, q_k = (k+1) p_{k+1} / c, through
    // the identity FM_l(q) = FM_{l+1}(p) / c.
    Rat fm_q(unsigned long l, const Rat& c) const;
};

FactorialMomentModel poisson_model();
FactorialMomentModel regular_model();
// Degree family c + c^{1-a/2} Y with E Y^2 -> beta: asymptotics only.
FactorialMomentModel shifted_family_model(const Rat& conc_exponent, const Rat& beta);
// Explicit factorial-moment table FM_0..FM_L pinned to one value of c.
FactorialMomentModel custom_model(std::string name, std::vector<Rat> fm_table, Rat c0);

// F(x) = -x^2/(1-x)^3, i.e. f(k) = -k(k-1)/2.
Series regular_f_series(std::size_t order);
// F(x) = beta x^2/(1-x)^3.
Series shifted_f_series(const Rat& beta, std::size_t order);

// Even-moment series of the mass-zero correction measure attached to f:
// coefficient k is its 2k-th moment, 2 F(x T)/(1 - x T^2). Requires
// f(0) = f(1) = 0.
Series sigma_f_moments(const Series& f_series, std::size_t order);

enum class DSource { paper_series, oracle_enumeration };

struct CoefficientTable {
    std::string kind;
    std::vector<Rat> values;
};

// kinds: a (Catalan), b (1/c correction), d (1/c^2 correction, source
// selectable), b_hat, d_hat (recentred versions at dilation 1 + 1/(2c)),
// sigma_f (needs f_series).
CoefficientTable coefficient_table(const std::string& kind, std::size_t order,
                                   DSource d_source = DSource::paper_series,
                                   const Series* f_series = nullptr);

// Rows "k,value" with a header line.
std::string to_csv(const CoefficientTable& table);

} // namespace dilute::expansion
