#include "nonlocal/specfun.hpp"

#include "nonlocal/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nonlocal {

namespace {

void require_dimension(int n)
{
    if (n < 1 || n > 3) {
        throw DomainError("dimension must be 1, 2 or 3, got " + std::to_string(n));
    }
}

} // namespace

FractionalOrder::FractionalOrder(double s) : s_(s)
{
    if (!(s > 0.0 && s < 1.0)) {
        throw DomainError("fractional order must lie in (0, 1), got " + std::to_string(s));
    }
}

TailConstant TailConstant::for_dimension(int n)
{
    require_dimension(n);
    constexpr double pi = std::numbers::pi;
    const double k = n == 1 ? 2.0 : (n == 2 ? 2.0 * pi : 4.0 * pi);
    return {n, k, 4.0 * k};
}

double gamma_fn(double a)
{
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("gamma_fn requires a finite positive argument");
    }
    return std::tgamma(a);
}

double c_ns(int n, FractionalOrder s)
{
    require_dimension(n);
    const double sv = s.value();
    return sv * std::exp2(2.0 * sv) * gamma_fn(0.5 * (n + 2)) / (gamma_fn(0.5) * gamma_fn(1.0 - sv));
}

double c_ns_classical(int n, FractionalOrder s)
{
    require_dimension(n);
    const double sv = s.value();
    return sv * std::exp2(2.0 * sv) * gamma_fn(0.5 * n + sv)
           / (std::pow(std::numbers::pi, 0.5 * n) * gamma_fn(1.0 - sv));
}

double tail_integral_constant(int n, FractionalOrder s, double lambda)
{
    const auto tc = TailConstant::for_dimension(n);
    if (!(lambda > 0.0)) {
        throw DomainError("tail_integral_constant requires lambda > 0");
    }
    return tc.k_n / (s.value() * std::pow(lambda, 2.0 * s.value()));
}

double theorem_bound(int n, FractionalOrder s, double lambda, double I, double u_l2, double C1)
{
    const auto tc = TailConstant::for_dimension(n);
    if (!(I >= 0.0) || !(lambda > I)) {
        throw DomainError("theorem_bound requires lambda > I >= 0");
    }
    if (!(u_l2 >= 0.0) || !(C1 > 0.0)) {
        throw DomainError("theorem_bound requires u_l2 >= 0 and C1 > 0");
    }
    const double sv = s.value();
    return tc.K_n / (C1 * C1 * sv * std::pow(lambda - I, 2.0 * sv)) * u_l2;
}

} // namespace nonlocal
