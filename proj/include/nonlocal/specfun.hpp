#pragma once

// Special functions and constants for the fractional kernel.

namespace nonlocal {

/// Fractional order s, restricted to the open interval (0, 1).
class FractionalOrder {
public:
    explicit FractionalOrder(double s);

    [[nodiscard]] double value() const noexcept { return s_; }
    [[nodiscard]] operator double() const noexcept { return s_; }

private:
    double s_;
};

/// Tail-integral constants k_n (2, 2*pi, 4*pi for n = 1, 2, 3) and K_n = 4 k_n.
struct TailConstant {
    int n;
    double k_n;
    double K_n;

    static TailConstant for_dimension(int n);
};

/// Gamma function for real a > 0.
double gamma_fn(double a);

/// Normalization c_{n,s} = s 2^{2s} Gamma((n+2)/2) / (Gamma(1/2) Gamma(1-s)), as printed.
///
/// This is *not* the constant for which the truncated operator converges to the
/// classical fractional Laplacian; see c_ns_classical. n must be 1, 2 or 3.
double c_ns(int n, FractionalOrder s);

/// Classical normalization s 4^s Gamma((n+2s)/2) / (pi^{n/2} Gamma(1-s)) of the
/// singular-integral fractional Laplacian. Reproduces the closed-form ball solutions.
double c_ns_classical(int n, FractionalOrder s);

/// k_n / (s lambda^{2s}): the tail constant used by the lambda -> infinity bound.
double tail_integral_constant(int n, FractionalOrder s, double lambda);

/// K_n / (C1^2 s (lambda - I)^{2s}) * ||u||_{L2}.
///
/// C1 is the (unknown) equivalence constant between the energy and H^s norms;
/// the bound is therefore meaningful only up to the factor C1^2. Requires lambda > I >= 0.
double theorem_bound(int n, FractionalOrder s, double lambda, double I, double u_l2, double C1 = 1.0);

} // namespace nonlocal
