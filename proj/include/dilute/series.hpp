#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dilute/rational.hpp"

namespace dilute::qs {

using dilute::Rat;

// Truncated formal power series with exact rational coefficients.
//
// A Series of order N stores the coefficients of x^0 .. x^{N-1} and every
// operation is exact through that window. Operations mixing two orders
// truncate to the smaller one (the only window where both inputs are known).
class Series {
public:
    Series() = default;
    explicit Series(std::size_t order) : c_(order) {}

    static Series constant(const Rat& v, std::size_t order);
    static Series identity(std::size_t order); // the series x
    static Series from_coeffs(std::vector<Rat> coeffs);

    std::size_t order() const { return c_.size(); }
    bool empty() const { return c_.empty(); }

    // Coefficient of x^k; reading past the window is an error, not a zero:
    // beyond order() - 1 the value is unknown, not known to vanish.
    const Rat& operator[](std::size_t k) const;
    Rat& at(std::size_t k);
    const std::vector<Rat>& coeffs() const { return c_; }

    Series truncated(std::size_t order) const;

    bool operator==(const Series& other) const { return c_ == other.c_; }

private:
    std::vector<Rat> c_;
};

Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series mul(const Series& a, const Series& b);
// Long division; b must have a nonzero constant term.
Series div(const Series& a, const Series& b);
// Coefficient k of the result is (k+1) * coefficient k+1 of a; order drops
// by one because the top coefficient of the derivative is unknown.
Series derivative(const Series& a);
// a(b(x)); b must have zero constant term so the substitution is finitary.
Series compose(const Series& a, const Series& b);
Series scale(const Rat& s, const Series& a);
// Multiplication by x^m inside a fixed window.
Series shift_up(const Series& a, std::size_t m);
// Division by x^m; the m lowest coefficients must vanish. Order drops by m.
Series shift_down(const Series& a, std::size_t m);
Series pow(const Series& a, unsigned e);

inline Series operator+(const Series& a, const Series& b) { return add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return sub(a, b); }
inline Series operator*(const Series& a, const Series& b) { return mul(a, b); }
inline Series operator*(const Rat& s, const Series& a) { return scale(s, a); }

// Catalan generating series, built from the convolution recursion
// Cat(n+1) = sum_{i+j=n} Cat(i) Cat(j); satisfies T = 1 + x T^2 exactly
// through the truncation window.
Series catalan_T(std::size_t order);

// Binomial series of sqrt(1-4x), via the generalized binomial coefficients
// C(1/2, n) (-4)^n. Deliberately independent of catalan_T so the identity
// (1 - x T^2) = sqrt(1-4x) * T is a genuine cross-check.
Series sqrt_one_minus_4x(std::size_t order);

// Coefficients joined by commas, rationals as "p" or "p/q".
std::string to_csv(const Series& a);

} // namespace dilute::qs
