#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dilute/rational.hpp"

namespace dilute::measures {

using dilute::Rat;

// Closed-form spectral densities. Even polynomials are stored packed:
// q[j] is the coefficient of x^{2j} (odd monomials cannot occur).
//
// sqrt_family means
//     prefactor_over_pi / pi * Q(x) / (4 - x^2)^{edge_halves / 2} on |x| < 2,
// the default prefactor 1/2 giving the usual Q(x) / (2 pi sqrt(4 - x^2)).
// kesten_mckay is c sqrt(4(c-1) - x^2) / (2 pi (c^2 - x^2)); with km_rescaled
// the variable is scaled by sqrt(c) so the support edge moves to
// 2 sqrt(1 - 1/c). Every form carries a rational dilation factor lambda,
// acting as f(x) -> f(x / lambda) / lambda.
struct DensityForm {
    enum class Kind { sqrt_family, kesten_mckay };
    Kind kind = Kind::sqrt_family;

    std::vector<Rat> q;
    Rat prefactor_over_pi = rat(1, 2);
    int edge_halves = 1; // 1 or 3; 3 is not integrable at the edge

    Rat km_c = 0;
    bool km_rescaled = false;

    Rat dilation = 1;
};

// Named closed forms:
//   sigma              semicircle, Q = 4 - x^2
//   sigma1             first-order correction, Q = x^4 - 4x^2 + 2
//   sigma1_hat         recentred first-order, Q = x^4 - 5x^2 + 4
//   sigma2_hat         recentred second-order, the sign convention that
//                      reproduces the moment tables
//   sigma1_hat_printed, sigma2_hat_printed
//                      the same densities with the sign (and denominator
//                      convention) of the printed closed forms
//   sigma2_raw         un-recentred second order; edge power 3/2, diverges
//                      non-integrably at the edge
DensityForm named_form(const std::string& name);
DensityForm semicircle();
DensityForm kesten_mckay(const Rat& c, bool rescaled);

// Composes multiplicatively with any dilation already present.
DensityForm dilate(DensityForm form, const Rat& lambda);

double support_edge(const DensityForm& form);
double density_eval(const DensityForm& form, double x);

// Exact 2k-th moment of Q(x)/(2 pi sqrt(4 - x^2)):
// (1/2) sum_j q_j C(2(k+j), k+j), by arcsine-moment duality.
Rat density_moments_exact(const std::vector<Rat>& q, unsigned k);

// Exact 2k-th moment of a whole form, prefactor, rescaling and dilation
// included. Kesten-McKay moments come from the closed-walk recursion on the
// regular tree, evaluated in exact rationals.
Rat form_moment_exact(const DensityForm& form, unsigned k);

// Least even polynomial data reproducing the listed moments m_0, m_1, ...
// (m_k the 2k-th moment): solves the linear system in the q_j exactly.
// Extra moments beyond degree/2 + 1 must be consistent or
// no_solution_error is raised with the first residual.
std::vector<Rat> moment_match_numerator(const std::vector<Rat>& moments, unsigned degree);

// Analytic transforms under the fixed branch contract
// sqrt(z^2 - 4) := z * principal_sqrt(1 - 4/z^2), so H(z) ~ 1/z at infinity.
// Names: H, H1, H2, H_hatB, H_hatD.
std::complex<double> stieltjes_eval(const std::string& name, std::complex<double> z);

// -(1/pi) Im at x + i eps; the boundary-limit route to the densities.
double recover_density(const std::string& name, double x, double eps = 1e-8);

// integral of x^{2k} * density via Gauss-Legendre after x = edge * sin(theta),
// which removes the edge singularity analytically. 256 nodes, with a
// half-order rerun backing the accuracy estimate.
double quadrature_moment(const DensityForm& form, unsigned k, double tol = 1e-9);

} // namespace dilute::measures
