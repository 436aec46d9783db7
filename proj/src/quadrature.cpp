#include "nonlocal/quadrature.hpp"

#include "nonlocal/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace nonlocal {

namespace {

// Kronrod 15-point abscissae (descending, last is the centre) and weights, with the
// embedded 7-point Gauss weights for the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.9914553711208126392068546975263, 0.9491079123427585245261896840479,
    0.8648644233597690727897127886409, 0.7415311855993944398638647732808,
    0.5860872354676911302941448456930, 0.4058451513773971669066064120770,
    0.2077849550078984676006894037732, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.0229353220105292249637320080590, 0.0630920926299785532907006631892,
    0.1047900103222501838398763225415, 0.1406532597155259187451895905102,
    0.1690047266392679028265834265986, 0.1903505780647854099132564024210,
    0.2044329400752988924141619992346, 0.2094821410847278280129991748917};
constexpr std::array<double, 4> kWg = {
    0.1294849661688696932706114326791, 0.2797053914892766679014677714238,
    0.3818300505051189449503697754890, 0.4179591836734693877551020408163};

GaussRule compute_gauss_rule(int n)
{
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        // Ascending order.
        const auto idx = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[idx] = z;
        rule.weights[idx] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

struct Panel {
    int segment;
    double t0;
    double t1;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

struct Segment {
    double a;
    double b;
};

} // namespace

void QuadConfig::validate() const
{
    if (inner_points < 1 || inner_points > 16) {
        throw DomainError("inner_points must be in [1, 16]");
    }
    if (!(outer_rel_tol > 0.0) || !(outer_abs_tol > 0.0)) {
        throw DomainError("quadrature tolerances must be positive");
    }
    if (max_subdivisions < 1) {
        throw DomainError("max_subdivisions must be >= 1");
    }
}

const GaussRule& gauss_rule(int npts)
{
    if (npts < 1 || npts > 16) {
        throw DomainError("Gauss-Legendre rule supports 1..16 points, got " + std::to_string(npts));
    }
    static const std::array<GaussRule, 16> rules = [] {
        std::array<GaussRule, 16> r;
        for (int n = 1; n <= 16; ++n) {
            r[static_cast<std::size_t>(n - 1)] = compute_gauss_rule(n);
        }
        return r;
    }();
    return rules[static_cast<std::size_t>(npts - 1)];
}

QuadResult adaptive_outer(const std::function<double(double)>& f, double a, double b, const QuadConfig& cfg,
                          std::span<const double> breakpoints)
{
    cfg.validate();
    if (a > b) {
        throw DomainError("adaptive_outer requires a <= b");
    }
    QuadResult result;
    if (a == b) {
        return result;
    }

    std::vector<double> cuts{a};
    for (double c : breakpoints) {
        if (c > a && c < b) {
            cuts.push_back(c);
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Segment> segments;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        segments.push_back({cuts[k], cuts[k + 1]});
    }

    auto integrate_panel = [&](int seg, double t0, double t1) {
        const Segment& s = segments[static_cast<std::size_t>(seg)];
        const double scale = 0.25 * (s.b - s.a);
        const double shift = 0.5 * (s.a + s.b);
        const double half = 0.5 * (t1 - t0);
        const double mid = 0.5 * (t0 + t1);
        auto g = [&](double t) {
            const double x = scale * t * (3.0 - t * t) + shift;
            const double jac = 3.0 * scale * (1.0 - t * t);
            const double v = f(x);
            if (!std::isfinite(v)) {
                throw ConvergenceError("adaptive_outer: integrand is not finite at x = " + std::to_string(x),
                                       0.0, std::numeric_limits<double>::infinity());
            }
            return v * jac;
        };
        const double fc = g(mid);
        double kron = kWgk[7] * fc;
        double gauss = kWg[3] * fc;
        for (int k = 0; k < 7; ++k) {
            const double dt = half * kXgk[static_cast<std::size_t>(k)];
            const double fsum = g(mid - dt) + g(mid + dt);
            kron += kWgk[static_cast<std::size_t>(k)] * fsum;
            if (k % 2 == 1) {
                gauss += kWg[static_cast<std::size_t>(k / 2)] * fsum;
            }
        }
        result.evaluations += 15;
        kron *= half;
        gauss *= half;
        return Panel{seg, t0, t1, kron, std::abs(kron - gauss)};
    };

    std::priority_queue<Panel> heap;
    double value = 0.0;
    double error = 0.0;
    double final_value = 0.0;
    double final_error = 0.0;
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        Panel p = integrate_panel(s, -1.0, 1.0);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());

    auto tolerance = [&] { return std::max(cfg.outer_abs_tol, cfg.outer_rel_tol * std::abs(value)); };

    int since_resum = 0;
    while (!heap.empty() && error > tolerance()) {
        if (panels >= cfg.max_subdivisions) {
            throw ConvergenceError("adaptive_outer: maximum number of subdivisions exceeded", value, error);
        }
        Panel worst = heap.top();
        heap.pop();
        const double tm = 0.5 * (worst.t0 + worst.t1);
        if (!(tm > worst.t0 && tm < worst.t1)) {
            final_value += worst.value;
            final_error += worst.error;
            result.roundoff_limited = true;
            continue;
        }
        Panel left = integrate_panel(worst.segment, worst.t0, tm);
        Panel right = integrate_panel(worst.segment, tm, worst.t1);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;

        // Incremental sums drift; rebuild them from the panels now and then.
        if (++since_resum == 64) {
            since_resum = 0;
            auto copy = heap;
            value = final_value;
            error = final_error;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }

    // Final sum, smallest contributions first.
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel& x, const Panel& y) { return std::abs(x.value) < std::abs(y.value); });
    result.value = final_value;
    result.error = final_error;
    for (const Panel& p : all) {
        result.value += p.value;
        result.error += p.error;
    }
    result.subintervals = panels;
    return result;
}

double power_difference(double R, double L, double q)
{
    const double log_ratio = std::log(R / L);
    if (q == 0.0) {
        return log_ratio;
    }
    // L^q (exp(q log(R/L)) - 1) / q, accurate for small q.
    return std::pow(L, q) * std::expm1(q * log_ratio) / q;
}

double inner_kernel_integral(const Mesh1D& mesh, const KernelSpec& spec, const QuadConfig& cfg, int j, double x)
{
    cfg.validate();
    if (j < 0 || j >= mesh.num_nodes()) {
        throw std::out_of_range("inner_kernel_integral: node index out of range");
    }
    const double lo = std::max(x - spec.lambda(), mesh.domain_left());
    const double hi = std::min(x + spec.lambda(), mesh.domain_right());
    const double s = spec.s().value();
    const double expo = -1.0 - 2.0 * s;
    const double q = 1.0 - 2.0 * s;
    const double phi_x = hat_eval(mesh, j, x);
    const GaussRule& rule = gauss_rule(cfg.inner_points);

    auto slope = [&](int e) {
        if (e == j - 1) {
            return 1.0 / mesh.element_length(e);
        }
        if (e == j) {
            return -1.0 / mesh.element_length(e);
        }
        return 0.0;
    };
    auto in_support = [&](int e) { return e == j - 1 || e == j; };

    // Elements touching x from the right and from the left.
    const int e_x = mesh.element_containing(x);
    int e_right = e_x;
    int e_left = e_x;
    if (x == mesh.node(e_x + 1) && e_x + 1 < mesh.num_elements()) {
        e_right = e_x + 1;
    }
    if (x == mesh.node(e_x) && e_x > 0) {
        e_left = e_x - 1;
    }
    if (x == mesh.domain_left()) {
        e_left = -1;
    }
    if (x == mesh.domain_right()) {
        e_right = -1;
    }

    double total = 0.0;

    // Singular part: phi_j(y) - phi_j(x) = slope (y - x) on the elements touching x.
    const double R = e_right >= 0 ? std::min(mesh.node(e_right + 1), hi) - x : 0.0;
    const double L = e_left >= 0 ? x - std::max(mesh.node(e_left), lo) : 0.0;
    const double sR = e_right >= 0 ? slope(e_right) : 0.0;
    const double sL = e_left >= 0 ? slope(e_left) : 0.0;
    if (sR == sL) {
        if (sR != 0.0) {
            if (R > 0.0 && L > 0.0) {
                total += sR * power_difference(R, L, q);
            } else if (q > 0.0) {
                total += sR * (std::pow(R, q) - std::pow(L, q)) / q;
            } else {
                throw DomainError("inner_kernel_integral diverges: one-sided singular integral with s >= 1/2");
            }
        }
    } else {
        if (q <= 0.0) {
            throw DomainError("inner_kernel_integral diverges at a kink of the basis function for s >= 1/2");
        }
        total += (sR * std::pow(R, q) - sL * std::pow(L, q)) / q;
    }

    auto integrand = [&](double y) { return (hat_eval(mesh, j, y) - phi_x) * std::pow(std::abs(y - x), expo); };

    const int first = mesh.element_containing(lo);
    const int last = mesh.element_containing(hi);
    for (int e = first; e <= last; ++e) {
        if (e == e_left || e == e_right) {
            continue;
        }
        if (!in_support(e) && phi_x == 0.0) {
            continue;
        }
        const double a = std::max(mesh.node(e), lo);
        const double b = std::min(mesh.node(e + 1), hi);
        total += graded_gauss(integrand, x, a, b, rule);
    }
    return total;
}

} // namespace nonlocal
