#pragma once

#include "nonlocal/kernel.hpp"
#include "nonlocal/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace nonlocal {

struct QuadConfig {
    int inner_points = 4;          ///< Gauss points per inner subinterval
    double outer_rel_tol = 1e-8;   ///< relative tolerance of the adaptive outer rule
    double outer_abs_tol = 1e-12;  ///< absolute tolerance of the adaptive outer rule
    int max_subdivisions = 10000;  ///< panel budget of the adaptive outer rule

    /// Throws DomainError unless inner_points in [1, 16] and all tolerances are positive.
    void validate() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached npts-point rule, 1 <= npts <= 16.
const GaussRule& gauss_rule(int npts);

/// npts-point Gauss-Legendre approximation of the integral of f over [a, b].
template <class F>
double gauss_legendre(F&& f, double a, double b, int npts)
{
    const GaussRule& rule = gauss_rule(npts);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        sum += rule.weights[q] * f(mid + half * rule.nodes[q]);
    }
    return half * sum;
}

/// Subintervals used by graded_gauss are at most this fraction of their distance to
/// the singular point; with the 4-point rule this keeps the per-piece relative error
/// near 1e-10.
inline constexpr double kNearFieldRatio = 0.25;

/// Gauss quadrature of g over [a, b] for an integrand that is singular (or nearly so)
/// at a point x outside the open interval. Pieces closer to x than 1/kNearFieldRatio
/// times their length are split geometrically toward x.
template <class G>
double graded_gauss(G&& g, double x, double a, double b, const GaussRule& rule)
{
    if (!(b > a)) {
        return 0.0;
    }
    const bool x_left = x <= a;
    const double near = x_left ? a - x : x - b;
    const double far = near + (b - a);
    auto piece = [&](double d0, double d1) {
        // Distances d0 < d1 from x, mapped back to y.
        const double y0 = x_left ? x + d0 : x - d1;
        const double y1 = x_left ? x + d1 : x - d0;
        const double half = 0.5 * (y1 - y0);
        const double mid = 0.5 * (y0 + y1);
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            sum += rule.weights[q] * g(mid + half * rule.nodes[q]);
        }
        return half * sum;
    };
    if (b - a <= kNearFieldRatio * near) {
        return piece(near, far);
    }
    double d = std::max(near, 1e-15 * (b - a));
    double sum = near < d ? piece(near, d) : 0.0;
    while (d < far) {
        const double next = std::min(far, d * (1.0 + kNearFieldRatio));
        sum += piece(d, next);
        d = next;
    }
    return sum;
}

struct QuadResult {
    double value = 0.0;
    double error = 0.0;       ///< sum of the panel error estimates |K15 - G7|
    int evaluations = 0;
    int subintervals = 0;
    bool roundoff_limited = false; ///< a panel could not be bisected further
};

/// Globally adaptive (G7, K15) Gauss-Kronrod quadrature of f over [a, b].
///
/// Each breakpoint-delimited segment is first mapped by the cubic substitution
/// x = (b-a)/4 t (3 - t^2) + (a+b)/2, which weakens integrable end-point singularities;
/// the panel with the largest error estimate is bisected until the total estimate is
/// below max(abs_tol, rel_tol |value|). Throws ConvergenceError (carrying the partial
/// value and estimate) once max_subdivisions panels exist.
QuadResult adaptive_outer(const std::function<double(double)>& f, double a, double b, const QuadConfig& cfg,
                          std::span<const double> breakpoints = {});

/// Integral over y in [x - lambda, x + lambda] (clipped to the domain) of
/// (phi_j(y) - phi_j(x)) / |y - x|^{1+2s}.
///
/// The range is split at x, at mesh nodes and at the clip points. On the element(s)
/// containing x the integrand is a pure power of |y - x| and is integrated in closed
/// form (as a principal value when both sides share a slope); elsewhere graded Gauss
/// with cfg.inner_points points is used. For s >= 1/2 at a kink of phi_j the integral
/// diverges and DomainError is thrown.
double inner_kernel_integral(const Mesh1D& mesh, const KernelSpec& spec, const QuadConfig& cfg, int j, double x);

/// (R^q - L^q) / q, continuous through q = 0 (where it is log(R / L)). R, L > 0.
double power_difference(double R, double L, double q);

} // namespace nonlocal
