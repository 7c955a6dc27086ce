#include "dilute/measures.hpp"

#include <cmath>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <unordered_map>
#include <utility>

#include "dilute/errors.hpp"

namespace dilute::measures {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

DensityForm sqrt_form(std::vector<Rat> q, Rat prefactor, int halves) {
    DensityForm f;
    f.kind = DensityForm::Kind::sqrt_family;
    f.q = std::move(q);
    f.prefactor_over_pi = std::move(prefactor);
    f.edge_halves = halves;
    return f;
}

Rat rat_pow(Rat base, unsigned e) {
    Rat out = 1;
    for (unsigned i = 0; i < e; ++i) out *= base;
    return out;
}

// 2k-th moment of the unrescaled Kesten-McKay law: closed walks of length 2k
// on the infinite c-regular tree, one down-choice of weight c at the root and
// c-1 below it. Exact in c, so rational c is fine.
Rat km_walk_moment(const Rat& c, unsigned k) {
    std::vector<Rat> cur(k + 2, 0), nxt(k + 2, 0);
    cur[0] = 1;
    for (unsigned step = 0; step < 2 * k; ++step) {
        for (auto& v : nxt) v = 0;
        for (unsigned h = 0; h + 1 < cur.size(); ++h) {
            if (cur[h] == 0) continue;
            if (h + 1 <= k) nxt[h + 1] += cur[h] * (h == 0 ? c : Rat(c - 1));
            if (h > 0) nxt[h - 1] += cur[h];
        }
        std::swap(cur, nxt);
    }
    return cur[0];
}

double horner_even(const std::vector<Rat>& q, double x) {
    double x2 = x * x;
    double acc = 0.0;
    for (std::size_t j = q.size(); j-- > 0;) acc = acc * x2 + rat_double(q[j]);
    return acc;
}

// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
struct GlRule {
    std::vector<double> x, w;
};

GlRule make_gl(unsigned n) {
    GlRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (unsigned j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double wt = 2.0 / ((1.0 - t * t) * dp * dp);
        r.x[i] = -t;
        r.w[i] = wt;
        r.x[n - 1 - i] = t;
        r.w[n - 1 - i] = wt;
    }
    return r;
}

const GlRule& gl_rule(unsigned n) {
    static std::mutex m;
    static std::unordered_map<unsigned, GlRule> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gl(n)).first;
    return it->second;
}

// One pass of the theta-substituted moment integral at a given node count.
// x = edge * sin(theta) removes the square-root edge factor analytically, so
// the integrand is smooth and Gauss-Legendre converges spectrally.
double theta_moment(const DensityForm& f, unsigned k, unsigned n) {
    const GlRule& g = gl_rule(n);
    const double lam = rat_double(f.dilation);
    double acc = 0.0;
    if (f.kind == DensityForm::Kind::sqrt_family) {
        const double pf = rat_double(f.prefactor_over_pi);
        for (unsigned i = 0; i < n; ++i) {
            double th = g.x[i] * (pi / 2.0);
            double s = 2.0 * std::sin(th);
            acc += g.w[i] * std::pow(s, 2.0 * k) * horner_even(f.q, s);
        }
        return pf / 2.0 * acc * std::pow(lam, 2.0 * k);
    }
    const double c = rat_double(f.km_c);
    const double L = 2.0 * std::sqrt(c - 1.0);
    for (unsigned i = 0; i < n; ++i) {
        double th = g.x[i] * (pi / 2.0);
        double sn = std::sin(th), cs = std::cos(th);
        double num = L * L * cs * cs;
        // c^2 - L^2 sin^2 = (c-2)^2 + L^2 cos^2 exactly; the right-hand side
        // stays cancellation-free at the support edge.
        double den = (c - 2.0) * (c - 2.0) + L * L * cs * cs;
        acc += g.w[i] * std::pow(L * sn, 2.0 * k) * num / den;
    }
    double base = c / 4.0 * acc;
    if (f.km_rescaled) base /= std::pow(c, static_cast<double>(k));
    return base * std::pow(lam, 2.0 * k);
}

// sqrt(z^2 - 4) on the branch with w ~ z at infinity. The factored product
// of principal roots is analytic off [-2, 2] (the cuts on (-inf, -2] cancel)
// and, unlike z * sqrt(1 - 4/z^2), stays fully accurate next to the edge.
cd complex_w(cd z) {
    return std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
}

} // namespace

DensityForm named_form(const std::string& name) {
    if (name == "sigma") return sqrt_form({4, -1}, rat(1, 2), 1);
    if (name == "sigma1") return sqrt_form({2, -4, 1}, rat(1, 2), 1);
    if (name == "sigma1_hat") return sqrt_form({4, -5, 1}, rat(1, 2), 1);
    if (name == "sigma2_hat")
        return sqrt_form({rat(21, 2), rat(-325, 4), 92, -34, 4}, rat(1, 2), 1);
    if (name == "sigma1_hat_printed") return sqrt_form({-4, 5, -1}, rat(1, 2), 1);
    if (name == "sigma2_hat_printed")
        return sqrt_form({rat(-21, 4), rat(325, 8), -46, 17, -2}, 1, 1);
    if (name == "sigma2_raw")
        return sqrt_form({19, -155, rat(435, 2), -113, 25, -2}, 1, 3);
    throw usage_error("unknown density name '" + name +
                      "' (expected sigma, sigma1, sigma1_hat, sigma2_hat, "
                      "sigma1_hat_printed, sigma2_hat_printed, sigma2_raw)");
}

DensityForm semicircle() { return named_form("sigma"); }

DensityForm kesten_mckay(const Rat& c, bool rescaled) {
    if (c < 2) throw dilute::domain_error("kesten_mckay needs c >= 2");
    DensityForm f;
    f.kind = DensityForm::Kind::kesten_mckay;
    f.km_c = c;
    f.km_rescaled = rescaled;
    return f;
}

DensityForm dilate(DensityForm form, const Rat& lambda) {
    if (lambda <= 0) throw dilute::domain_error("dilation factor must be positive");
    form.dilation *= lambda;
    return form;
}

double support_edge(const DensityForm& form) {
    double lam = rat_double(form.dilation);
    if (form.kind == DensityForm::Kind::sqrt_family) return 2.0 * lam;
    double c = rat_double(form.km_c);
    double edge = 2.0 * std::sqrt(c - 1.0);
    if (form.km_rescaled) edge /= std::sqrt(c);
    return edge * lam;
}

double density_eval(const DensityForm& form, double x) {
    const double lam = rat_double(form.dilation);
    const double edge = support_edge(form);
    if (std::abs(x) >= edge) return 0.0;
    const double y = x / lam;
    if (form.kind == DensityForm::Kind::sqrt_family) {
        double s = 4.0 - y * y;
        double root = std::sqrt(s);
        double den = (form.edge_halves == 3) ? s * root : root;
        return rat_double(form.prefactor_over_pi) * horner_even(form.q, y) / (pi * den) / lam;
    }
    const double c = rat_double(form.km_c);
    double g = form.km_rescaled ? y * std::sqrt(c) : y;
    double base = c * std::sqrt(4.0 * (c - 1.0) - g * g) / (2.0 * pi * (c * c - g * g));
    if (form.km_rescaled) base *= std::sqrt(c);
    return base / lam;
}

Rat density_moments_exact(const std::vector<Rat>& q, unsigned k) {
    Rat acc = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        unsigned m = k + static_cast<unsigned>(j);
        acc += q[j] * rat_binom(2 * m, m);
    }
    return acc / 2;
}

Rat form_moment_exact(const DensityForm& form, unsigned k) {
    Rat dil = rat_pow(form.dilation, 2 * k);
    if (form.kind == DensityForm::Kind::sqrt_family) {
        if (form.edge_halves != 1)
            throw dilute::domain_error(
                "exact moments need an integrable edge (edge_halves == 1)");
        // density_moments_exact is normalised to 1/(2 pi); rescale by the
        // actual prefactor.
        return Rat(2) * form.prefactor_over_pi * density_moments_exact(form.q, k) * dil;
    }
    Rat base = km_walk_moment(form.km_c, k);
    if (form.km_rescaled) base /= rat_pow(form.km_c, k);
    return base * dil;
}

std::vector<Rat> moment_match_numerator(const std::vector<Rat>& moments, unsigned degree) {
    if (degree % 2 != 0) throw usage_error("numerator degree must be even");
    const std::size_t t = degree / 2 + 1;
    if (moments.size() < t)
        throw usage_error("need at least " + std::to_string(t) +
                          " moments for degree " + std::to_string(degree));
    const std::size_t m = moments.size();
    // Row i states: sum_j q_j * C(2(i+j), i+j) / 2 = m_i.
    std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(t + 1, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < t; ++j) {
            unsigned s = static_cast<unsigned>(i + j);
            rows[i][j] = rat_binom(2 * s, s) / 2;
        }
        rows[i][t] = moments[i];
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < t && rank < m; ++col) {
        std::size_t piv = rank;
        while (piv < m && rows[piv][col] == 0) ++piv;
        if (piv == m) continue;
        std::swap(rows[rank], rows[piv]);
        Rat inv = rows[rank][col];
        for (auto& v : rows[rank]) v /= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            Rat f = rows[r][col];
            for (std::size_t cidx = col; cidx <= t; ++cidx) rows[r][cidx] -= f * rows[rank][cidx];
        }
        ++rank;
    }
    if (rank < t)
        throw no_solution_error("moment system is rank deficient", "0");
    for (std::size_t r = rank; r < m; ++r) {
        if (rows[r][t] != 0)
            throw no_solution_error(
                "moments are inconsistent with an even numerator of degree " +
                    std::to_string(degree),
                rat_str(rows[r][t]));
    }
    std::vector<Rat> q(t, 0);
    for (std::size_t r = 0; r < t; ++r) {
        // After full reduction row r has a lone unit pivot in column r.
        q[r] = rows[r][t];
    }
    return q;
}

std::complex<double> stieltjes_eval(const std::string& name, std::complex<double> z) {
    if (z.imag() == 0.0 && std::abs(z.real()) <= 2.0)
        throw dilute::domain_error("z lies on the branch cut [-2, 2]");
    cd w = complex_w(z);
    cd h = (z - w) / 2.0;
    cd h2 = h * h;
    cd h4 = h2 * h2;
    if (name == "H") return h;
    if (name == "H1") return h4 / w;
    if (name == "H2") {
        cd h6 = h4 * h2, h8 = h4 * h4, h10 = h8 * h2;
        return (h4 + 6.0 * h6 - 10.0 * h8 + 4.0 * h10) / (w * w * w);
    }
    if (name == "H_hatB") return (h4 - h2) / w;
    if (name == "H_hatD") {
        cd h6 = h4 * h2;
        return h2 * (16.0 * h6 - 8.0 * h4 + 3.0) / (4.0 * w);
    }
    throw usage_error("unknown transform '" + name +
                      "' (expected H, H1, H2, H_hatB, H_hatD)");
}

double recover_density(const std::string& name, double x, double eps) {
    if (std::abs(x) >= 2.0)
        throw dilute::domain_error("density recovery needs |x| < 2");
    if (!(eps > 0.0) || eps > 1e-4)
        throw usage_error("eps must lie in (0, 1e-4]");
    return -stieltjes_eval(name, cd(x, eps)).imag() / pi;
}

double quadrature_moment(const DensityForm& form, unsigned k, double tol) {
    if (!(tol > 0.0)) throw usage_error("tolerance must be positive");
    if (form.kind == DensityForm::Kind::sqrt_family && form.edge_halves != 1)
        throw dilute::domain_error(
            "quadrature moments need an integrable edge (edge_halves == 1)");
    double fine = theta_moment(form, k, 256);
    double coarse = theta_moment(form, k, 128);
    double err = std::abs(fine - coarse);
    if (err > tol)
        throw accuracy_error("quadrature disagreement " + std::to_string(err) +
                                 " exceeds tolerance",
                             fine);
    return fine;
}

} // namespace dilute::measures
