#include "nonlocal/metrics.hpp"

#include "nonlocal/errors.hpp"
#include "nonlocal/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace nonlocal {

double l2_error_omega(const FEFunction& uh, const std::function<double(double)>& u_ref, int npts)
{
    const Mesh1D& m = uh.mesh();
    double sum = 0.0;
    for (int e = m.left_boundary_node(); e < m.right_boundary_node(); ++e) {
        sum += gauss_legendre(
            [&](double x) {
                const double d = uh(x) - u_ref(x);
                return d * d;
            },
            m.node(e), m.node(e + 1), npts);
    }
    return std::sqrt(sum);
}

double l2_difference(const FEFunction& a, const FEFunction& b)
{
    const Mesh1D& ma = a.mesh();
    const Mesh1D& mb = b.mesh();
    std::vector<double> pts;
    for (const Mesh1D* m : {&ma, &mb}) {
        for (int k = m->left_boundary_node(); k <= m->right_boundary_node(); ++k) {
            pts.push_back(m->node(k));
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        // Both functions are continuous and linear on each merged piece.
        const double xl = pts[k];
        const double xr = pts[k + 1];
        const double u = a(xl) - b(xl);
        const double v = a(xr) - b(xr);
        sum += (xr - xl) * (u * u + u * v + v * v) / 3.0;
    }
    return std::sqrt(sum);
}

double energy_error(const FEFunction& e, const NonlocalSystem& system)
{
    const double q = bilinear_apply(system, e, e);
    if (q < 0.0) {
        const double scale = system.A.diagonal().cwiseAbs().maxCoeff();
        const auto f = e.free_dofs();
        double vv = 0.0;
        for (double v : f) {
            vv += v * v;
        }
        if (q < -1e-12 * scale * vv) {
            throw InternalConsistencyError("energy_error: negative quadratic form");
        }
        return 0.0;
    }
    return std::sqrt(q);
}

std::vector<double> observed_rate(std::span<const std::pair<double, double>> errors)
{
    if (errors.size() < 2) {
        throw DomainError("observed_rate needs at least two entries");
    }
    std::vector<double> rates;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const auto [p0, e0] = errors[k - 1];
        const auto [p1, e1] = errors[k];
        if (e0 <= 0.0 || e1 <= 0.0 || p0 <= 0.0 || p1 <= 0.0 || p0 == p1) {
            throw DomainError("observed_rate undefined for zero error or equal parameters");
        }
        // Positive when the error shrinks, whether the parameter is refined down (h) or up (lambda).
        rates.push_back(std::log(e0 / e1) / std::abs(std::log(p0 / p1)));
    }
    return rates;
}

void attach_rates(std::vector<ErrorRecord>& records)
{
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& prev = records[k - 1];
        auto& cur = records[k];
        const std::pair<double, double> l2[] = {{prev.param, prev.l2_error}, {cur.param, cur.l2_error}};
        if (prev.l2_error > 0.0 && cur.l2_error > 0.0) {
            cur.rate_l2 = observed_rate(l2).front();
        }
        if (prev.energy_error && cur.energy_error && *prev.energy_error > 0.0 && *cur.energy_error > 0.0) {
            const std::pair<double, double> en[] = {{prev.param, *prev.energy_error}, {cur.param, *cur.energy_error}};
            cur.rate_energy = observed_rate(en).front();
        }
    }
}

} // namespace nonlocal
