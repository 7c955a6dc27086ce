#include "dilute/expansion.hpp"

#include <utility>

#include "dilute/errors.hpp"
#include "dilute/walks.hpp"

namespace dilute::expansion {

using qs::catalan_T;
using qs::compose;
using qs::derivative;
using qs::div;
using qs::mul;
using qs::pow;
using qs::scale;
using qs::shift_down;
using qs::shift_up;
using qs::sub;

namespace {

Series one(std::size_t n) { return Series::constant(1, n); }

// x T(x)^2 within the window of t.
Series xt2(const Series& t) { return shift_up(mul(t, t), 1); }

Series s1_closed(std::size_t n) {
    // x^2 (2x T' T^3 + T^4); the derivative costs one order.
    Series t_ext = catalan_T(n + 1);
    Series dt = derivative(t_ext); // order n
    Series t = t_ext.truncated(n);
    Series inner = shift_up(scale(2, mul(dt, pow(t, 3))), 1) + pow(t, 4);
    return shift_up(inner, 2);
}

Series b1_tilde(std::size_t n) {
    Series t = catalan_T(n);
    return shift_up(div(pow(t, 5), one(n) - xt2(t)), 2);
}

Series b1_pairs(std::size_t n) { // 2 x^2 T^6 / (1 - x T^2)
    Series t = catalan_T(n);
    return shift_up(scale(2, div(pow(t, 6), one(n) - xt2(t))), 2);
}

Series d2_series(std::size_t n) {
    Series t = catalan_T(n);
    return shift_up(div(pow(t, 7), one(n) - xt2(t)), 3);
}

Series d11_series(std::size_t n) {
    Series t = catalan_T(n);
    Series u = xt2(t);
    Series numer = Series::constant(8, n) - scale(11, u) + scale(4, mul(u, u));
    Series denom = pow(one(n) - u, 3);
    return shift_up(div(mul(pow(t, 9), numer), denom), 4);
}

Series d_series(std::size_t n) {
    Series t = catalan_T(n);
    Series u = xt2(t);
    Series numer = one(n) + scale(6, u) - scale(10, mul(u, u)) + scale(4, pow(u, 3));
    Series denom = pow(one(n) - u, 3);
    return shift_up(div(mul(pow(t, 7), numer), denom), 3);
}

Series b_hat_series(std::size_t n) {
    Series dt = derivative(catalan_T(n + 1));
    return s1_closed(n) - shift_up(dt, 1);
}

Series b0_series(const Series& f, std::size_t n) {
    std::size_t w = std::min(n, f.order());
    Series t = catalan_T(w);
    Series xt = shift_up(t, 1);
    Series g = compose(f.truncated(w), xt);
    return scale(2, div(g, one(w) - xt2(t)));
}

Series b0_tilde_series(const Series& f, std::size_t n) {
    // F(xT) / (x T (1 - x T^2)): the division by x consumes one coefficient,
    // so the result window is one shorter than what f provides.
    std::size_t w = std::min(n + 1, f.order());
    if (w < 2) throw usage_error("B0_tilde needs at least two coefficients of F");
    Series t = catalan_T(w);
    Series g = compose(f.truncated(w), shift_up(t, 1));
    if (g[0] != 0) throw domain_error("B0_tilde needs f(0) = 0");
    Series lowered = shift_down(g, 1); // order w - 1
    std::size_t m = w - 1;
    Series tm = t.truncated(m);
    return div(lowered, mul(tm, one(m) - xt2(tm)));
}

} // namespace

Series s1_combinatorial(std::size_t order) {
    if (order == 0) throw usage_error("series order must be at least 1");
    std::vector<Rat> cat = catalan_T(order).coeffs();
    // Three-fold Catalan convolution, plain loops on the number table.
    std::vector<Rat> cat3(order);
    for (std::size_t p2 = 0; p2 < order; ++p2)
        for (std::size_t p3 = 0; p2 + p3 < order; ++p3)
            for (std::size_t p4 = 0; p2 + p3 + p4 < order; ++p4)
                cat3[p2 + p3 + p4] += cat[p2] * cat[p3] * cat[p4];
    std::vector<Rat> out(order);
    for (std::size_t k = 2; k < order; ++k) {
        Rat acc = 0;
        for (std::size_t p1 = 0; p1 + 2 <= k; ++p1)
            acc += Rat(2 * static_cast<long>(p1) + 1) * cat[p1] * cat3[k - 2 - p1];
        out[k] = acc;
    }
    return Series::from_coeffs(std::move(out));
}

Series d_hat_series(std::size_t order, const Rat& dilation_alpha,
                    bool last_term_alpha_squared) {
    const Rat& a = dilation_alpha;
    Series b_prime = derivative(s1_closed(order + 1)); // order
    Series t_dd = derivative(derivative(catalan_T(order + 2)));
    Series t_d = derivative(catalan_T(order + 1));
    Rat last = Rat(3) * a;
    if (last_term_alpha_squared) last *= a;
    return d_series(order)
         - scale(Rat(2 * a), shift_up(b_prime, 1))
         + scale(Rat(2 * a * a), shift_up(t_dd, 2))
         + scale(last, shift_up(t_d, 1));
}

Series named_series(const std::string& name, std::size_t order,
                    const Series* f_series) {
    if (order == 0) throw usage_error("series order must be at least 1");
    if (name == "S1" || name == "B1") return s1_closed(order);
    if (name == "B1_tilde") return b1_tilde(order);
    if (name == "B1_2") return b1_pairs(order);
    if (name == "A0_2") return mul(catalan_T(order), catalan_T(order));
    if (name == "A0_3") return pow(catalan_T(order), 3);
    if (name == "D2") return d2_series(order);
    if (name == "D11") return d11_series(order);
    if (name == "D") return d_series(order);
    if (name == "B_hat") return b_hat_series(order);
    if (name == "D_hat") return d_hat_series(order, rat(1, 2), true);
    if (name == "B0" || name == "B0_tilde") {
        if (!f_series)
            throw usage_error("series '" + name + "' needs an f series");
        return name == "B0" ? b0_series(*f_series, order)
                            : b0_tilde_series(*f_series, order);
    }
    throw usage_error("unknown series name '" + name + "'");
}

Rat FactorialMomentModel::fm_p(unsigned long l, const Rat& c) const {
    if (!fm)
        throw unsupported_error("model '" + name +
                                "' carries asymptotics only, no exact factorial moments");
    return fm(l, c);
}

Rat FactorialMomentModel::fm_q(unsigned long l, const Rat& c) const {
    if (c <= 0) throw usage_error("mean degree c must be positive");
    return fm_p(l + 1, c) / c;
}

FactorialMomentModel poisson_model() {
    FactorialMomentModel m;
    m.name = "poisson";
    m.fm = [](unsigned long l, const Rat& c) {
        Rat r = 1;
        for (unsigned long i = 0; i < l; ++i) r *= c;
        return r;
    };
    // All factorial-moment corrections vanish, at every scale.
    return m;
}

FactorialMomentModel regular_model() {
    FactorialMomentModel m;
    m.name = "regular";
    m.fm = [](unsigned long l, const Rat& c) {
        Rat r = 1;
        for (unsigned long i = 0; i < l; ++i) r *= c - Rat(static_cast<long>(i));
        return r;
    };
    m.conc_exponent = Rat(1);
    m.f_alpha = [](std::size_t n) { return regular_f_series(n); };
    return m;
}

FactorialMomentModel shifted_family_model(const Rat& conc_exponent, const Rat& beta) {
    if (conc_exponent <= 0) throw usage_error("concentration exponent must be positive");
    FactorialMomentModel m;
    m.name = "shifted_family";
    m.conc_exponent = conc_exponent;
    m.f_alpha = [beta](std::size_t n) { return shifted_f_series(beta, n); };
    // On top of the c^{-a} term the family keeps the degree-rigidity
    // correction -k(k-1)/2 at scale 1/c.
    m.f_extra_c1 = [](std::size_t n) { return regular_f_series(n); };
    return m;
}

FactorialMomentModel custom_model(std::string name, std::vector<Rat> fm_table, Rat c0) {
    if (fm_table.empty() || fm_table[0] != 1)
        throw usage_error("factorial-moment table must start with FM_0 = 1");
    if (fm_table.size() > 1 && fm_table[1] != c0)
        throw usage_error("factorial-moment table must have FM_1 = c");
    FactorialMomentModel m;
    m.name = std::move(name);
    m.fm = [table = std::move(fm_table), c0](unsigned long l, const Rat& c) {
        if (c != c0)
            throw unsupported_error("custom factorial-moment table is pinned to c = " +
                                    rat_str(c0));
        if (l >= table.size())
            throw unsupported_error("custom factorial-moment table ends at l = " +
                                    std::to_string(table.size() - 1));
        return table[l];
    };
    return m;
}

Series regular_f_series(std::size_t order) {
    return shifted_f_series(Rat(-1), order);
}

Series shifted_f_series(const Rat& beta, std::size_t order) {
    // beta x^2 / (1-x)^3 = beta sum_k C(k,2) x^k.
    Series f(order);
    for (std::size_t k = 2; k < order; ++k)
        f.at(k) = beta * Rat(static_cast<long>(k * (k - 1) / 2));
    return f;
}

Series sigma_f_moments(const Series& f_series, std::size_t order) {
    if (f_series[0] != 0 || (f_series.order() > 1 && f_series[1] != 0))
        throw domain_error("sigma_f needs f(0) = f(1) = 0");
    return b0_series(f_series, order);
}

CoefficientTable coefficient_table(const std::string& kind, std::size_t order,
                                   DSource d_source, const Series* f_series) {
    if (order == 0) throw usage_error("table order must be at least 1");
    CoefficientTable table;
    table.kind = kind;
    auto cat = catalan_T(order).coeffs();
    auto d_values = [&]() {
        return d_source == DSource::paper_series
                   ? d_series(order).coeffs()
                   : walks::d_oracle_values(order);
    };
    if (kind == "a") {
        table.values = cat;
    } else if (kind == "b") {
        table.values = s1_closed(order).coeffs();
    } else if (kind == "d") {
        table.values = d_values();
    } else if (kind == "b_hat") {
        auto b = s1_closed(order).coeffs();
        table.values.resize(order);
        for (std::size_t k = 0; k < order; ++k)
            table.values[k] = b[k] - Rat(static_cast<long>(k)) * cat[k];
    } else if (kind == "d_hat") {
        auto b = s1_closed(order).coeffs();
        auto d = d_values();
        table.values.resize(order);
        for (std::size_t k = 0; k < order; ++k) {
            long lk = static_cast<long>(k);
            table.values[k] = d[k] - Rat(lk) * b[k] +
                              rat(lk * (2 * lk + 1), 4) * cat[k];
        }
    } else if (kind == "sigma_f") {
        if (!f_series) throw usage_error("table 'sigma_f' needs an f series");
        table.values = sigma_f_moments(*f_series, order).coeffs();
    } else {
        throw usage_error("unknown coefficient table '" + kind + "'");
    }
    return table;
}

std::string to_csv(const CoefficientTable& table) {
    std::string out = "k,value\n";
    for (std::size_t k = 0; k < table.values.size(); ++k)
        out += std::to_string(k) + "," + rat_str(table.values[k]) + "\n";
    return out;
}

} // namespace dilute::expansion
