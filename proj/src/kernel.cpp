#include "nonlocal/kernel.hpp"

#include "nonlocal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace nonlocal {

namespace {

double distance(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw DomainError("points have different dimensions");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = y[k] - x[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double power_law(const KernelSpec& spec, double r)
{
    if (r == 0.0) {
        throw SingularityError("kernel evaluated at coincident points");
    }
    return spec.c() / (2.0 * std::pow(r, spec.exponent()));
}

} // namespace

std::string to_string(Normalization norm)
{
    return norm == Normalization::Classical ? "classical" : "as-printed";
}

Normalization normalization_from_string(const std::string& name)
{
    if (name == "classical") {
        return Normalization::Classical;
    }
    if (name == "as-printed" || name == "printed") {
        return Normalization::AsPrinted;
    }
    throw DomainError("unknown normalization '" + name + "'");
}

KernelSpec::KernelSpec(int n, FractionalOrder s, double lambda, Normalization norm)
    : n_(n), s_(s), lambda_(lambda), norm_(norm),
      c_(norm == Normalization::Classical ? c_ns_classical(n, s) : c_ns(n, s))
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("interaction radius must be positive and finite");
    }
}

KernelSpec KernelSpec::with_lambda(double lambda) const
{
    return KernelSpec(n_, s_, lambda, norm_);
}

double gamma_full(const KernelSpec& spec, double x, double y)
{
    return power_law(spec, std::abs(y - x));
}

double gamma_full(const KernelSpec& spec, std::span<const double> x, std::span<const double> y)
{
    return power_law(spec, distance(x, y));
}

double gamma_truncated(const KernelSpec& spec, double x, double y)
{
    const double r = std::abs(y - x);
    const double value = power_law(spec, r);
    return r <= spec.lambda() ? value : 0.0;
}

double gamma_truncated(const KernelSpec& spec, std::span<const double> x, std::span<const double> y)
{
    const double r = distance(x, y);
    const double value = power_law(spec, r);
    return r <= spec.lambda() ? value : 0.0;
}

KernelCheckReport check_kernel_conditions(const KernelSpec& spec, int sample_count,
                                          const KernelFunction& kernel, unsigned long long seed)
{
    if (sample_count < 1) {
        throw DomainError("sample_count must be >= 1");
    }
    const KernelFunction eval = kernel ? kernel : KernelFunction([&spec](auto x, auto y) {
        return gamma_truncated(spec, x, y);
    });

    constexpr double tol = 1e-12;
    const int n = spec.n();
    const double lambda = spec.lambda();
    const double bound = spec.c() / 2.0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> x(n);
    std::vector<double> y(n);
    std::vector<double> dir(n);

    // Pair at distance r from a random base point along a random direction.
    auto make_pair = [&](double r) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (int k = 0; k < n; ++k) {
                dir[k] = gauss(rng);
                norm += dir[k] * dir[k];
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (int k = 0; k < n; ++k) {
            x[k] = -1.0 + 2.0 * unit(rng);
            y[k] = x[k] + r * dir[k] / norm;
        }
    };

    KernelCheckReport report;
    report.samples = sample_count;
    report.worst_nonnegativity = std::numeric_limits<double>::infinity();
    report.worst_half_ball = std::numeric_limits<double>::infinity();
    report.worst_lower_margin = std::numeric_limits<double>::infinity();
    report.worst_upper_margin = std::numeric_limits<double>::infinity();

    for (int k = 0; k < sample_count; ++k) {
        // Inside B_lambda (r in (0, lambda]).
        const double r_in = lambda * (1.0 - unit(rng));
        make_pair(r_in);
        const double r_actual = distance(x, y);
        const double g_in = eval(x, y);
        report.worst_nonnegativity = std::min(report.worst_nonnegativity, g_in);
        if (r_actual <= lambda * (1.0 - 1e-12)) {
            const double reference = bound / std::pow(r_actual, spec.exponent());
            report.worst_lower_margin = std::min(report.worst_lower_margin, g_in / reference - 1.0);
            report.worst_upper_margin = std::min(report.worst_upper_margin, 1.0 - g_in / reference);
        }

        // Inside B_{lambda/2}.
        make_pair(0.5 * lambda * (1.0 - unit(rng)));
        report.worst_half_ball = std::min(report.worst_half_ball, eval(x, y));

        // Outside B_lambda, out to 3 lambda.
        make_pair(lambda * (1.0 + 1e-9 + 2.0 * unit(rng)));
        report.worst_outside = std::max(report.worst_outside, std::abs(eval(x, y)));
    }

    report.nonnegative_on_ball = report.worst_nonnegativity >= 0.0;
    report.positive_on_half_ball = report.worst_half_ball > 0.0;
    report.vanishes_outside_ball = report.worst_outside == 0.0;
    report.power_bounds = report.worst_lower_margin >= -tol && report.worst_upper_margin >= -tol;
    return report;
}

} // namespace nonlocal
