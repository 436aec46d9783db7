#include "nonlocal/analytic.hpp"

#include "nonlocal/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nonlocal {

namespace {

double norm(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

double distance(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw std::invalid_argument("points of different dimension");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double greens_from_distances(double nx, double ny, double dist, const GreensConfig& cfg)
{
    if (dist == 0.0) {
        throw SingularityError("Green's function evaluated at coincident points");
    }
    const double R2 = cfg.R * cfg.R;
    if (nx > cfg.R || ny > cfg.R) {
        throw DomainError("Green's function evaluated outside the ball");
    }
    const double r = (R2 - nx * nx) * (R2 - ny * ny) / (dist * dist);
    const double s = cfg.s.value();
    return cfg.normalization * std::pow(dist, 2.0 * s - cfg.n) * greens_radial_integral(r, cfg.n, cfg.s, cfg.quad);
}

} // namespace

double greens_constant_printed(int n, FractionalOrder s, double R)
{
    if (n < 1 || n > 3) {
        throw DomainError("Green's constant supports n = 1, 2, 3");
    }
    if (!(R > 0.0)) {
        throw DomainError("ball radius must be positive");
    }
    const double sv = s.value();
    const double g = gamma_fn(sv);
    return std::pow(sv, -2.0 * sv) * gamma_fn(0.5 * n) / (R * R * std::pow(std::numbers::pi, 0.5 * n) * g * g);
}

GreensConfig GreensConfig::printed(int n, FractionalOrder s, double R)
{
    GreensConfig cfg;
    cfg.R = R;
    cfg.n = n;
    cfg.s = s;
    cfg.normalization = greens_constant_printed(n, s, R);
    return cfg;
}

void GreensConfig::validate() const
{
    if (!(R > 0.0)) {
        throw DomainError("GreensConfig: R must be positive");
    }
    if (n < 1 || n > 3) {
        throw DomainError("GreensConfig: n must be 1, 2 or 3");
    }
    quad.validate();
}

double exact_u_const_f(double x, int n, FractionalOrder s)
{
    const std::array<double, 1> p{x};
    return exact_u_const_f(p, n, s);
}

double exact_u_const_f(std::span<const double> x, int n, FractionalOrder s)
{
    const double r = norm(x);
    if (r >= 1.0) {
        return 0.0;
    }
    const double sv = s.value();
    const double k = std::pow(2.0, -2.0 * sv) * gamma_fn(0.5 * n) / (gamma_fn(0.5 * (n + 2.0 * sv)) * gamma_fn(1.0 + sv));
    return k * std::pow(1.0 - r * r, sv);
}

double r0(double x, double y, double R)
{
    const std::array<double, 1> px{x};
    const std::array<double, 1> py{y};
    return r0(px, py, R);
}

double r0(std::span<const double> x, std::span<const double> y, double R)
{
    const double d = distance(x, y);
    if (d == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double nx = norm(x);
    const double ny = norm(y);
    return (R * R - nx * nx) * (R * R - ny * ny) / (d * d);
}

double greens_radial_integral(double r, int n, FractionalOrder s, const QuadConfig& quad)
{
    if (!(r >= 0.0)) {
        throw DomainError("radial integral needs r >= 0");
    }
    if (std::isinf(r)) {
        throw SingularityError("radial integral at r = infinity");
    }
    if (r == 0.0) {
        return 0.0;
    }
    const double sv = s.value();
    const double inv_s = 1.0 / sv;
    const double half_n = 0.5 * n;
    const double upper = std::pow(r, sv);

    auto body = [=](double t) { return inv_s * std::pow(std::pow(t, inv_s) + 1.0, -half_n); };
    const double head = adaptive_outer(body, 0.0, std::min(upper, 1.0), quad).value;
    if (upper <= 1.0) {
        return head;
    }
    // t = e^v on [1, upper].
    auto tail = [=](double v) {
        const double t = std::exp(v);
        return inv_s * t * std::pow(std::exp(v * inv_s) + 1.0, -half_n);
    };
    return head + adaptive_outer(tail, 0.0, std::log(upper), quad).value;
}

double greens_G(double x, double y, const GreensConfig& cfg)
{
    return greens_from_distances(std::abs(x), std::abs(y), std::abs(x - y), cfg);
}

double greens_G(std::span<const double> x, std::span<const double> y, const GreensConfig& cfg)
{
    if (static_cast<int>(x.size()) != cfg.n) {
        throw std::invalid_argument("point dimension does not match GreensConfig::n");
    }
    return greens_from_distances(norm(x), norm(y), distance(x, y), cfg);
}

double exact_u_via_green(double x, const std::function<double(double)>& f, const GreensConfig& cfg)
{
    cfg.validate();
    if (cfg.n != 1) {
        throw DomainError("exact_u_via_green integrates in one dimension only");
    }
    if (!(std::abs(x) < cfg.R)) {
        return 0.0;
    }
    auto integrand = [&](double y) { return y == x ? 0.0 : greens_G(x, y, cfg) * f(y); };
    const std::array<double, 1> split{x};
    return adaptive_outer(integrand, -cfg.R, cfg.R, cfg.quad, split).value;
}

GreensCalibration calibrate_greens(int n, FractionalOrder s, double R, std::span<const double> probes)
{
    static constexpr std::array<double, 6> default_probes{-0.75, -0.5, -0.25, 0.25, 0.5, 0.75};
    if (probes.empty()) {
        probes = default_probes;
    }
    GreensConfig cfg = GreensConfig::printed(n, s, R);
    const auto one = [](double) { return 1.0; };
    // Closed form is stated on the unit ball; rescale u(x) = R^{2s} u_1(x / R).
    const auto closed = [&](double x) { return std::pow(R, 2.0 * s.value()) * exact_u_const_f(x / R, n, s); };

    GreensCalibration out;
    out.printed = cfg.normalization;
    out.ratio = closed(0.0) / exact_u_via_green(0.0, one, cfg);
    out.calibrated = out.printed * out.ratio;
    for (double x : probes) {
        const double ratio = closed(x) / exact_u_via_green(x, one, cfg);
        out.probes.push_back(x);
        out.probe_ratios.push_back(ratio);
        out.max_ratio_drift = std::max(out.max_ratio_drift, std::abs(ratio / out.ratio - 1.0));
    }
    return out;
}

GreensConfig calibrated_greens_config(int n, FractionalOrder s, double R)
{
    GreensConfig cfg = GreensConfig::printed(n, s, R);
    const auto one = [](double) { return 1.0; };
    const double closed = std::pow(R, 2.0 * s.value()) * exact_u_const_f(0.0, n, s);
    cfg.normalization *= closed / exact_u_via_green(0.0, one, cfg);
    return cfg;
}

} // namespace nonlocal
