#pragma once

#include <gmpxx.h>

#include <string>

#include "dilute/errors.hpp"

namespace dilute {

// Exact rational scalar. GMP keeps values canonical (lowest terms, positive
// denominator), which is exactly the invariant we need; this header only adds
// construction and formatting helpers so the rest of the code never touches
// the C API.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw domain_error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p" or "p/q" with optional sign, as used by the --c flag and by
// CSV/JSON round-trips.
inline Rat rat_parse(const std::string& text) {
    if (text.empty()) throw usage_error("empty rational literal");
    mpq_class r;
    if (r.set_str(text, 10) != 0)
        throw usage_error("bad rational literal: '" + text + "'");
    if (r.get_den() == 0)
        throw usage_error("zero denominator in rational literal: '" + text + "'");
    r.canonicalize();
    return r;
}

// "p" when the denominator is 1, otherwise "p/q".
inline std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double rat_double(const Rat& r) { return r.get_d(); }

inline Rat rat_binom(unsigned long n, unsigned long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}

} // namespace dilute
