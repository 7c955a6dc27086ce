#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dilute/errors.hpp"
#include "dilute/expansion.hpp"
#include "dilute/series.hpp"

using namespace dilute;
using namespace dilute::expansion;
using qs::Series;

namespace {

Series from_longs(std::initializer_list<long> v) {
    std::vector<Rat> c;
    for (long x : v) c.emplace_back(x);
    return Series::from_coeffs(std::move(c));
}

} // namespace

TEST_CASE("first-order correction series, frozen values") {
    CHECK(named_series("S1", 6) == from_longs({0, 0, 1, 6, 28, 120}));
    CHECK(named_series("S1", 9) ==
          from_longs({0, 0, 1, 6, 28, 120, 495, 2002, 8008}));
    CHECK(named_series("B1", 6) == named_series("S1", 6));
}

TEST_CASE("two independent routes to the first-order series agree") {
    // closed form x^2 (2x T' T^3 + T^4) versus the direct sum over the
    // position and excursion shape of the quadruple edge
    CHECK(named_series("S1", 32) == s1_combinatorial(32));
}

TEST_CASE("rational-form variants of the first-order series") {
    CHECK(named_series("B1_tilde", 32) == named_series("B1", 32));
    CHECK(named_series("B1_2", 5) == from_longs({0, 0, 2, 14, 72}));
}

TEST_CASE("zero-loop powers") {
    CHECK(named_series("A0_2", 5) == from_longs({1, 2, 5, 14, 42}));
    CHECK(named_series("A0_3", 5) == from_longs({1, 3, 9, 28, 90}));
}

TEST_CASE("second-order correction series, frozen values and the split") {
    CHECK(named_series("D", 6) == from_longs({0, 0, 0, 1, 16, 130}));
    CHECK(named_series("D2", 5) == from_longs({0, 0, 0, 1, 8}));
    // two-loop part plus the disjoint-pair part carries everything
    CHECK(named_series("D", 32) ==
          named_series("D2", 32) + named_series("D11", 32));
}

TEST_CASE("recentred series") {
    CHECK(named_series("B_hat", 6) == from_longs({0, -1, -3, -9, -28, -90}));
    // recentring subtracts the dilation flow of the Catalan numbers
    Series t_prime = qs::derivative(qs::catalan_T(13));
    CHECK(named_series("B_hat", 12) ==
          named_series("S1", 12) - qs::shift_up(t_prime, 1));
}

TEST_CASE("root corrections as fixed points") {
    std::vector<Rat> fc(10, Rat(0));
    for (std::size_t k = 2; k < 10; ++k) fc[k] = rat(static_cast<long>(k), 3);
    Series f = Series::from_coeffs(std::move(fc));

    Series t = qs::catalan_T(10);
    Series xt = qs::shift_up(t, 1);
    Series xt2 = qs::shift_up(qs::mul(t, t), 1);
    Series f_at_xt = qs::compose(f, xt);

    Series b0 = named_series("B0", 10, &f);
    CHECK(b0 - qs::mul(xt2, b0) == qs::scale(rat(2), f_at_xt));

    // the per-child variant consumes one order: multiply back by x T (1 - x T^2)
    Series b0t = named_series("B0_tilde", 9, &f);
    Series lhs = qs::mul(qs::mul(xt.truncated(9), b0t),
                         (Series::constant(rat(1), 9) - xt2.truncated(9)));
    CHECK(lhs == f_at_xt.truncated(9));
}

TEST_CASE("factorial moments of the named offspring models") {
    auto poisson = poisson_model();
    auto regular = regular_model();

    CHECK(poisson.exact());
    CHECK(poisson.fm_p(3, rat(5)) == rat(125));
    CHECK(poisson.fm_p(0, rat(5)) == rat(1));
    CHECK_FALSE(poisson.conc_exponent.has_value());

    CHECK(regular.fm_p(2, rat(3)) == rat(6));
    CHECK(regular.fm_p(3, rat(3)) == rat(6));
    CHECK(regular.fm_p(4, rat(3)) == rat(0));
    // falling factorial stays meaningful at non-integer c
    CHECK(regular.fm_p(2, rat(137, 10)) == rat(137, 10) * rat(127, 10));
    CHECK(regular.conc_exponent == rat(1));

    // Poisson offspring is its own size-biased child law
    for (unsigned l = 0; l <= 12; ++l) {
        CHECK(poisson.fm_q(l, rat(7)) == poisson.fm_p(l, rat(7)));
    }
}

TEST_CASE("size-biased child law via the factorial moment shift") {
    for (const Rat& c : {rat(2), rat(3), rat(10), rat(137, 10), rat(1, 2)}) {
        auto regular = regular_model();
        auto poisson = poisson_model();
        for (unsigned l = 0; l <= 12; ++l) {
            CHECK(regular.fm_q(l, c) == regular.fm_p(l + 1, c) / c);
            CHECK(poisson.fm_q(l, c) == poisson.fm_p(l + 1, c) / c);
        }
    }
}

TEST_CASE("custom model pins a factorial moment table") {
    auto m = custom_model("toy", {rat(1), rat(3), rat(6), rat(6)}, rat(3));
    CHECK(m.exact());
    CHECK(m.fm_p(2, rat(3)) == rat(6));
    CHECK(m.fm_q(1, rat(3)) == rat(2));
    CHECK_THROWS_AS(m.fm_p(4, rat(3)), unsupported_error);
    CHECK_THROWS_AS(m.fm_p(2, rat(4)), unsupported_error);
    CHECK_THROWS_AS(custom_model("bad", {rat(2), rat(3)}, rat(3)), usage_error);
}

TEST_CASE("shifted degree family carries asymptotics only") {
    auto m = shifted_family_model(rat(1, 2), rat(2));
    CHECK_FALSE(m.exact());
    CHECK(m.conc_exponent == rat(1, 2));
    CHECK(m.f_alpha(6) == shifted_f_series(rat(2), 6));
}

TEST_CASE("degree-fluctuation correction measures") {
    // regular: F(x) = -x^2/(1-x)^3 gives exactly -2 S1
    Series reg = regular_f_series(9);
    CHECK(reg[2] == rat(-1));
    CHECK(reg[4] == rat(-6));
    CHECK(sigma_f_moments(reg, 9) == qs::scale(rat(-2), named_series("S1", 9)));

    // Poisson: no degree fluctuation at scale 1/c beyond S1 itself
    Series zero = Series::constant(rat(0), 9);
    CHECK(sigma_f_moments(zero, 9) == Series::constant(rat(0), 9));

    // the moments are linear in beta
    Series shifted = shifted_f_series(rat(5, 3), 9);
    CHECK(sigma_f_moments(shifted, 9) ==
          qs::scale(rat(10, 3), named_series("S1", 9)));

    // a correction measure must carry no mass or mean shift
    std::vector<Rat> bad(4, Rat(0));
    bad[1] = rat(1);
    Series bad_f = Series::from_coeffs(std::move(bad));
    CHECK_THROWS_AS(sigma_f_moments(bad_f, 4), dilute::domain_error);
}

TEST_CASE("coefficient tables") {
    auto a = coefficient_table("a", 6);
    CHECK(a.values == std::vector<Rat>{rat(1), rat(1), rat(2), rat(5), rat(14), rat(42)});

    auto b = coefficient_table("b", 6);
    CHECK(b.values == std::vector<Rat>{rat(0), rat(0), rat(1), rat(6), rat(28), rat(120)});

    auto b_hat = coefficient_table("b_hat", 5);
    CHECK(b_hat.values == std::vector<Rat>{rat(0), rat(-1), rat(-3), rat(-9), rat(-28)});

    auto d_paper = coefficient_table("d", 6);
    CHECK(d_paper.values == std::vector<Rat>{rat(0), rat(0), rat(0), rat(1), rat(16), rat(130)});

    // the enumeration-backed source disagrees with the series route at k = 4
    auto d_oracle = coefficient_table("d", 5, DSource::oracle_enumeration);
    CHECK(d_oracle.values[3] == rat(1));
    CHECK(d_oracle.values[4] == rat(14));

    CHECK_THROWS_AS(coefficient_table("nope", 4), usage_error);
}

TEST_CASE("recentred second-order coefficients") {
    auto d_hat = coefficient_table("d_hat", 5);
    CHECK(d_hat.values ==
          std::vector<Rat>{rat(0), rat(3, 4), rat(3), rat(37, 4), rat(30)});

    auto d_hat_oracle = coefficient_table("d_hat", 5, DSource::oracle_enumeration);
    CHECK(d_hat_oracle.values[4] == rat(28));
    CHECK(d_hat_oracle.values[3] == rat(37, 4));

    // the series-level recentring with the quadratic dilation term matches
    // the per-coefficient table at the critical dilation rate 1/2 ...
    Series via_series = d_hat_series(5, rat(1, 2), true);
    for (std::size_t k = 0; k < 5; ++k) CHECK(via_series[k] == d_hat.values[k]);

    // ... and the reading with a linear last term does not
    Series linear_last = d_hat_series(5, rat(1, 2), false);
    CHECK(linear_last[2] != d_hat.values[2]);
}

TEST_CASE("sigma_f coefficient table requires the series") {
    Series reg = regular_f_series(6);
    auto table = coefficient_table("sigma_f", 6, DSource::paper_series, &reg);
    CHECK(table.values[2] == rat(-2));
    CHECK(table.values[4] == rat(-56));
    CHECK_THROWS_AS(coefficient_table("sigma_f", 6), usage_error);
}

TEST_CASE("table csv layout") {
    auto t = coefficient_table("d_hat", 3);
    CHECK(to_csv(t) == "k,value\n0,0\n1,3/4\n2,3\n");
}
