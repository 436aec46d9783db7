#pragma once

#include "nonlocal/quadrature.hpp"
#include "nonlocal/specfun.hpp"

#include <functional>
#include <span>
#include <vector>

namespace nonlocal {

/// Printed Green's function constant s^{-2s} Gamma(n/2) / (R^2 pi^{n/2} Gamma(s)^2).
double greens_constant_printed(int n, FractionalOrder s, double R = 1.0);

/// Parameters of the Green's function representation on the ball B_R(0).
struct GreensConfig {
    double R = 1.0;
    int n = 1;
    FractionalOrder s{0.5};
    double normalization = greens_constant_printed(1, FractionalOrder{0.5}, 1.0);
    QuadConfig quad{4, 1e-10, 1e-13, 20000};

    /// Config with the printed constant for (n, s, R).
    static GreensConfig printed(int n, FractionalOrder s, double R = 1.0);
    void validate() const;
};

/// 2^{-2s} Gamma(n/2) / (Gamma((n+2s)/2) Gamma(1+s)) (1 - |x|^2)^s; 0 for |x| >= 1.
double exact_u_const_f(double x, int n, FractionalOrder s);
double exact_u_const_f(std::span<const double> x, int n, FractionalOrder s);

/// (R^2 - |x|^2)(R^2 - |y|^2) / |x - y|^2, +infinity when x == y.
double r0(double x, double y, double R);
double r0(std::span<const double> x, std::span<const double> y, double R);

/// Integral over [0, r] of t^{s-1} (t + 1)^{-n/2}. Uses the substitution t = u^{1/s};
/// the tail beyond u = 1 is integrated in log coordinates.
double greens_radial_integral(double r, int n, FractionalOrder s, const QuadConfig& quad);

/// normalization |x - y|^{2s-n} times greens_radial_integral(r0). SingularityError at x == y.
double greens_G(double x, double y, const GreensConfig& cfg);
double greens_G(std::span<const double> x, std::span<const double> y, const GreensConfig& cfg);

/// Integral of G(x, y) f(y) over (-R, R), split at y = x (one dimension only).
double exact_u_via_green(double x, const std::function<double(double)>& f, const GreensConfig& cfg);

/// Outcome of matching the Green's representation for f = 1 to the closed form.
struct GreensCalibration {
    double printed = 0.0;     ///< constant as printed
    double calibrated = 0.0;  ///< constant that reproduces the closed form at x = 0
    double ratio = 0.0;       ///< calibrated / printed
    double max_ratio_drift = 0.0; ///< max relative deviation of the ratio over the probe points
    std::vector<double> probes;
    std::vector<double> probe_ratios;
};

/// Calibrates the constant at x = 0 and measures the x-dependence of the ratio at the
/// probe points (defaults to +-0.25, +-0.5, +-0.75).
GreensCalibration calibrate_greens(int n, FractionalOrder s, double R = 1.0, std::span<const double> probes = {});

/// Printed config with the normalization replaced by the calibrated value.
GreensConfig calibrated_greens_config(int n, FractionalOrder s, double R = 1.0);

} // namespace nonlocal
