#include "dilute/series.hpp"

#include <algorithm>

#include "dilute/errors.hpp"

namespace dilute::qs {

namespace {

std::size_t common_order(const Series& a, const Series& b) {
    return std::min(a.order(), b.order());
}

} // namespace

Series Series::constant(const Rat& v, std::size_t order) {
    if (order == 0) throw usage_error("series order must be at least 1");
    Series s(order);
    s.at(0) = v;
    return s;
}

Series Series::identity(std::size_t order) {
    if (order < 2) throw usage_error("the series x needs order at least 2");
    Series s(order);
    s.at(1) = 1;
    return s;
}

Series Series::from_coeffs(std::vector<Rat> coeffs) {
    if (coeffs.empty()) throw usage_error("series order must be at least 1");
    Series s;
    s.c_ = std::move(coeffs);
    return s;
}

const Rat& Series::operator[](std::size_t k) const {
    if (k >= c_.size()) throw usage_error("coefficient index beyond series order");
    return c_[k];
}

Rat& Series::at(std::size_t k) {
    if (k >= c_.size()) throw usage_error("coefficient index beyond series order");
    return c_[k];
}

Series Series::truncated(std::size_t order) const {
    if (order == 0) throw usage_error("series order must be at least 1");
    if (order >= c_.size()) return *this;
    Series s;
    s.c_.assign(c_.begin(), c_.begin() + static_cast<long>(order));
    return s;
}

Series add(const Series& a, const Series& b) {
    std::size_t n = common_order(a, b);
    Series r(n);
    for (std::size_t k = 0; k < n; ++k) r.at(k) = a[k] + b[k];
    return r;
}

Series sub(const Series& a, const Series& b) {
    std::size_t n = common_order(a, b);
    Series r(n);
    for (std::size_t k = 0; k < n; ++k) r.at(k) = a[k] - b[k];
    return r;
}

Series mul(const Series& a, const Series& b) {
    std::size_t n = common_order(a, b);
    Series r(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < n; ++j) {
            if (b[j] == 0) continue;
            r.at(i + j) += a[i] * b[j];
        }
    }
    return r;
}

Series div(const Series& a, const Series& b) {
    if (b[0] == 0)
        throw domain_error("series division needs a nonzero constant term");
    std::size_t n = common_order(a, b);
    Series q(n);
    for (std::size_t k = 0; k < n; ++k) {
        Rat acc = a[k];
        for (std::size_t i = 0; i < k; ++i) acc -= q[i] * b[k - i];
        q.at(k) = acc / b[0];
    }
    return q;
}

Series derivative(const Series& a) {
    if (a.order() < 2)
        throw usage_error("derivative needs order at least 2");
    Series r(a.order() - 1);
    for (std::size_t k = 0; k + 1 < a.order(); ++k)
        r.at(k) = Rat(static_cast<long>(k + 1)) * a[k + 1];
    return r;
}

Series compose(const Series& a, const Series& b) {
    if (b[0] != 0)
        throw domain_error("composition needs an inner series with zero constant term");
    std::size_t n = common_order(a, b);
    // Horner evaluation of a at b, truncating every intermediate product.
    Series bt = b.truncated(n);
    Series r = Series::constant(a[n - 1], n);
    for (std::size_t k = n - 1; k-- > 0;) {
        r = mul(r, bt);
        r.at(0) += a[k];
    }
    return r;
}

Series scale(const Rat& s, const Series& a) {
    Series r(a.order());
    for (std::size_t k = 0; k < a.order(); ++k) r.at(k) = s * a[k];
    return r;
}

Series shift_up(const Series& a, std::size_t m) {
    Series r(a.order());
    for (std::size_t k = m; k < a.order(); ++k) r.at(k) = a[k - m];
    return r;
}

Series shift_down(const Series& a, std::size_t m) {
    if (a.order() <= m)
        throw usage_error("shift_down would consume the whole window");
    for (std::size_t k = 0; k < m; ++k)
        if (a[k] != 0)
            throw domain_error("shift_down needs the low coefficients to vanish");
    Series r(a.order() - m);
    for (std::size_t k = 0; k < r.order(); ++k) r.at(k) = a[k + m];
    return r;
}

Series pow(const Series& a, unsigned e) {
    Series r = Series::constant(1, a.order());
    for (unsigned i = 0; i < e; ++i) r = mul(r, a);
    return r;
}

Series catalan_T(std::size_t order) {
    if (order == 0) throw usage_error("series order must be at least 1");
    std::vector<Rat> cat(order);
    cat[0] = 1;
    for (std::size_t n = 0; n + 1 < order; ++n) {
        Rat acc = 0;
        for (std::size_t i = 0; i <= n; ++i) acc += cat[i] * cat[n - i];
        cat[n + 1] = acc;
    }
    return Series::from_coeffs(std::move(cat));
}

Series sqrt_one_minus_4x(std::size_t order) {
    if (order == 0) throw usage_error("series order must be at least 1");
    std::vector<Rat> c(order);
    // c_n = C(1/2, n) (-4)^n, accumulated through the term ratio
    // c_n / c_{n-1} = 2 (2n - 3) / n.
    c[0] = 1;
    for (std::size_t n = 1; n < order; ++n) {
        long ln = static_cast<long>(n);
        c[n] = c[n - 1] * rat(2 * (2 * ln - 3), ln);
    }
    return Series::from_coeffs(std::move(c));
}

std::string to_csv(const Series& a) {
    std::string out;
    for (std::size_t k = 0; k < a.order(); ++k) {
        if (k) out += ',';
        out += rat_str(a[k]);
    }
    return out;
}

} // namespace dilute::qs
