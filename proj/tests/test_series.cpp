#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dilute/errors.hpp"
#include "dilute/series.hpp"

using namespace dilute;
using namespace dilute::qs;

namespace {

Series from_longs(std::initializer_list<long> v) {
    std::vector<Rat> c;
    for (long x : v) c.emplace_back(x);
    return Series::from_coeffs(std::move(c));
}

// Small random series for the algebraic property checks. Numerators in
// [-9, 9], denominators in [1, 9], fixed seed so failures are reproducible.
Series random_series(std::mt19937_64& rng, std::size_t order, bool unit_constant) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 9);
    std::vector<Rat> c(order);
    for (auto& v : c) v = rat(num(rng), den(rng));
    if (unit_constant && c[0] == 0) c[0] = 1;
    return Series::from_coeffs(std::move(c));
}

} // namespace

TEST_CASE("catalan_T produces the Catalan numbers") {
    CHECK(catalan_T(6) == from_longs({1, 1, 2, 5, 14, 42}));
    CHECK(catalan_T(1) == from_longs({1}));
    CHECK_THROWS_AS(catalan_T(0), usage_error);
}

TEST_CASE("catalan_T matches the closed form (1 - sqrt(1-4x)) / (2x)") {
    const std::size_t n = 12;
    Series s = sqrt_one_minus_4x(n + 1);
    Series numer = sub(Series::constant(1, n + 1), s);
    Series closed = scale(rat(1, 2), shift_down(numer, 1));
    CHECK(closed == catalan_T(n));
}

TEST_CASE("T satisfies its defining fixed point at every order up to 64") {
    for (std::size_t n = 1; n <= 64; ++n) {
        Series t = catalan_T(n);
        Series rhs = add(Series::constant(1, n),
                         shift_up(mul(t, t), 1));
        CHECK(t == rhs);
    }
}

TEST_CASE("multiplication: T^2 starts 1,2,5,14,42") {
    Series t = catalan_T(5);
    CHECK(mul(t, t) == from_longs({1, 2, 5, 14, 42}));
}

TEST_CASE("division: 1/(1 - x T^2) expands the central ballot numbers") {
    const std::size_t n = 6;
    Series t = catalan_T(n);
    Series denom = sub(Series::constant(1, n), shift_up(mul(t, t), 1));
    Series q = div(Series::constant(1, n), denom);
    CHECK(q == from_longs({1, 1, 3, 10, 35, 126}));
    // Sanity anchor for the top value: 126 = C(10,5)/2.
    CHECK(q[5] == rat_binom(10, 5) / 2);
}

TEST_CASE("derivative of x is 1") {
    CHECK(derivative(Series::identity(2)) == from_longs({1}));
}

TEST_CASE("division by a series with zero constant term is rejected") {
    Series a = from_longs({1, 2, 3});
    Series b = from_longs({0, 1, 1});
    CHECK_THROWS_AS(div(a, b), domain_error);
}

TEST_CASE("composition requires a zero inner constant term") {
    Series a = from_longs({1, 2, 3});
    Series b = from_longs({1, 1, 0});
    CHECK_THROWS_AS(compose(a, b), domain_error);
}

TEST_CASE("mixed orders truncate to the smaller window") {
    Series a = catalan_T(8);
    Series b = catalan_T(4);
    CHECK(add(a, b).order() == 4);
    CHECK(mul(a, b).order() == 4);
}

TEST_CASE("ring axioms on random series") {
    std::mt19937_64 rng(20260814u);
    const std::size_t order = 16;
    for (int trial = 0; trial < 100; ++trial) {
        Series a = random_series(rng, order, false);
        Series b = random_series(rng, order, false);
        Series c = random_series(rng, order, false);
        CHECK(add(add(a, b), c) == add(a, add(b, c)));
        CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
        CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
        CHECK(mul(a, b) == mul(b, a));
        CHECK(add(a, b) == add(b, a));
    }
}

TEST_CASE("division inverts multiplication when the divisor is a unit") {
    std::mt19937_64 rng(911u);
    for (int trial = 0; trial < 100; ++trial) {
        Series a = random_series(rng, 16, false);
        Series b = random_series(rng, 16, true);
        CHECK(div(mul(a, b), b) == a);
    }
}

TEST_CASE("T' (1 - x T^2) = T^3") {
    const std::size_t n = 24;
    Series t = catalan_T(n + 1);
    Series dt = derivative(t); // order n
    Series tn = t.truncated(n);
    Series denom = sub(Series::constant(1, n), shift_up(mul(tn, tn), 1));
    CHECK(mul(dt, denom) == pow(tn, 3));
}

TEST_CASE("1 - x T^2 = sqrt(1-4x) * T") {
    const std::size_t n = 24;
    Series t = catalan_T(n);
    Series lhs = sub(Series::constant(1, n), shift_up(mul(t, t), 1));
    CHECK(lhs == mul(sqrt_one_minus_4x(n), t));
}

TEST_CASE("composition substitutes one series into another") {
    // a(x) = 1/(1-x), b(x) = x + x^2: a(b) = 1 + (x+x^2) + (x+x^2)^2 + ...
    Series a = from_longs({1, 1, 1, 1, 1});
    Series b = from_longs({0, 1, 1, 0, 0});
    CHECK(compose(a, b) == from_longs({1, 1, 2, 3, 5}));
}

TEST_CASE("csv formatting uses p/q only when needed") {
    Series s = Series::from_coeffs({rat(1), rat(-3, 4), rat(2)});
    CHECK(to_csv(s) == "1,-3/4,2");
}
