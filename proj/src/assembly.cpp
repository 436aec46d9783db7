#include "nonlocal/assembly.hpp"

#include "nonlocal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nonlocal {

namespace {

constexpr int kLoadPoints = 4;

/// Value and slope of the hat function of node k on element e.
struct LocalHat {
    const Mesh1D& mesh;
    int k;

    [[nodiscard]] bool supported_on(int e) const { return e == k - 1 || e == k; }

    [[nodiscard]] double slope(int e) const
    {
        if (e == k - 1) {
            return 1.0 / mesh.element_length(e);
        }
        if (e == k) {
            return -1.0 / mesh.element_length(e);
        }
        return 0.0;
    }

    /// Value at y, given y lies in element e.
    [[nodiscard]] double on_element(int e, double y) const
    {
        if (e == k - 1) {
            return (y - mesh.node(e)) / mesh.element_length(e);
        }
        if (e == k) {
            return (mesh.node(e + 1) - y) / mesh.element_length(e);
        }
        return 0.0;
    }

    [[nodiscard]] double at(double x) const { return hat_eval(mesh, k, x); }
};

class EntryIntegrand {
public:
    EntryIntegrand(const Mesh1D& mesh, const KernelSpec& spec, const QuadConfig& cfg, int i, int j)
        : mesh_(mesh), lambda_(spec.lambda()), s_(spec.s().value()), expo_(-1.0 - 2.0 * spec.s().value()),
          rule_(gauss_rule(cfg.inner_points)), hi_(mesh, i), hj_(mesh, j)
    {
        s_first_ = std::min(i, j) - 1;
        s_last_ = std::max(i, j);
        for (int e : {i - 1, i, j - 1, j}) {
            if (std::find(elems_.begin(), elems_.end(), e) == elems_.end()) {
                elems_.push_back(e);
            }
        }
        std::sort(elems_.begin(), elems_.end());
    }

    /// Inner integral over y for fixed x in the support union.
    double operator()(double x) const
    {
        const double phi_i = hi_.at(x);
        const double phi_j = hj_.at(x);
        const double lo = x - lambda_;
        const double hi = x + lambda_;
        const double q = 2.0 - 2.0 * s_;
        double total = 0.0;

        for (int e : elems_) {
            const double xl = mesh_.node(e);
            const double xr = mesh_.node(e + 1);
            const double a = std::max(xl, lo);
            const double b = std::min(xr, hi);
            if (!(b > a)) {
                continue;
            }
            if (x >= xl && x <= xr) {
                // (phi_i(y) - phi_i(x)) (phi_j(y) - phi_j(x)) = s_i s_j (y - x)^2 on e.
                const double ss = hi_.slope(e) * hj_.slope(e);
                if (ss != 0.0) {
                    total += ss * (std::pow(x - a, q) + std::pow(b - x, q)) / q;
                }
                continue;
            }
            if ((!hj_.supported_on(e) && phi_j == 0.0) || (!hi_.supported_on(e) && phi_i == 0.0)) {
                continue;
            }
            auto g = [&](double y) {
                const double di = hi_.on_element(e, y) - phi_i;
                const double dj = hj_.on_element(e, y) - phi_j;
                return di * dj * std::pow(std::abs(y - x), expo_);
            };
            total += graded_gauss(g, x, a, b, rule_);
        }

        const double mass = phi_i * phi_j;
        if (mass != 0.0) {
            // y outside the support union: the numerator is the constant phi_i(x) phi_j(x),
            // counted twice for the mirrored (x outside, y inside) region. The kernel mass
            // of the two remaining intervals is integrated exactly.
            const double clo = std::max(lo, mesh_.domain_left());
            const double chi = std::min(hi, mesh_.domain_right());
            const double s_lo = mesh_.node(s_first_);
            const double s_hi = mesh_.node(s_last_ + 1);
            double far = 0.0;
            if (clo < s_lo) {
                far += power_difference(x - clo, x - s_lo, -2.0 * s_);
            }
            if (chi > s_hi) {
                far += power_difference(chi - x, s_hi - x, -2.0 * s_);
            }
            total += 2.0 * mass * far;
        }
        return total;
    }

private:
    const Mesh1D& mesh_;
    double lambda_;
    double s_;
    double expo_;
    const GaussRule& rule_;
    LocalHat hi_;
    LocalHat hj_;
    int s_first_;
    int s_last_;
    std::vector<int> elems_;
};

void add_breakpoints(std::vector<double>& out, const Mesh1D& mesh, int first_node, int last_node,
                     int kink_first, int kink_last, double lambda)
{
    const double lo = mesh.node(first_node);
    const double hi = mesh.node(last_node);
    for (int k = first_node; k <= last_node; ++k) {
        out.push_back(mesh.node(k));
    }
    for (int k = kink_first; k <= kink_last; ++k) {
        for (double c : {mesh.node(k) - lambda, mesh.node(k) + lambda}) {
            if (c > lo && c < hi) {
                out.push_back(c);
            }
        }
    }
}

bool is_uniform(const Mesh1D& mesh)
{
    const double h0 = mesh.element_length(0);
    for (int e = 1; e < mesh.num_elements(); ++e) {
        if (std::abs(mesh.element_length(e) - h0) > 1e-12 * h0) {
            return false;
        }
    }
    return true;
}

void require_compatible(const Mesh1D& mesh, const KernelSpec& spec)
{
    if (spec.lambda() > mesh.lambda() * (1.0 + 1e-12)) {
        throw DomainError("kernel interaction radius exceeds the mesh's interaction domain");
    }
    if (spec.n() != 1) {
        throw DomainError("assembly is one-dimensional; kernel dimension must be 1");
    }
}

/// Index of the first leading minor that is not positive (unblocked Cholesky).
int first_nonpositive_minor(const Eigen::MatrixXd& A)
{
    Eigen::MatrixXd L = A;
    const Eigen::Index n = L.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        double d = L(k, k) - L.row(k).head(k).squaredNorm();
        if (!(d > 0.0)) {
            return static_cast<int>(k);
        }
        d = std::sqrt(d);
        L(k, k) = d;
        for (Eigen::Index r = k + 1; r < n; ++r) {
            L(r, k) = (L(r, k) - L.row(r).head(k).dot(L.row(k).head(k))) / d;
        }
    }
    return -1;
}

double interior_l2_distance(const FEFunction& a, const FEFunction& b)
{
    const Mesh1D& m = a.mesh();
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    const Mesh1D& mb = b.mesh();
    double sum = 0.0;
    for (int e = 0; e < m.N(); ++e) {
        const auto ka = static_cast<std::size_t>(m.left_boundary_node() + e);
        const auto kb = static_cast<std::size_t>(mb.left_boundary_node() + e);
        const double u = ca[ka] - cb[kb];
        const double v = ca[ka + 1] - cb[kb + 1];
        sum += m.element_length(m.left_boundary_node() + e) * (u * u + u * v + v * v) / 3.0;
    }
    return std::sqrt(sum);
}

} // namespace

double stiffness_entry(const Mesh1D& mesh, const KernelSpec& spec, const QuadConfig& cfg, int i, int j)
{
    require_compatible(mesh, spec);
    if (!mesh.is_free(i) || !mesh.is_free(j)) {
        throw std::out_of_range("stiffness_entry: nodes must be free dofs");
    }
    if (i > j) {
        std::swap(i, j);
    }
    const double lambda = spec.lambda();
    const double half_c = 0.5 * spec.c();

    if (j >= i + 2) {
        // Disjoint supports: the two mirrored halves are equal, integrate x over supp(phi_i).
        const double gap = mesh.node(j - 1) - mesh.node(i + 1);
        if (gap >= lambda) {
            return 0.0;
        }
        EntryIntegrand integrand(mesh, spec, cfg, i, j);
        std::vector<double> breaks;
        add_breakpoints(breaks, mesh, i - 1, i + 1, j - 1, j + 1, lambda);
        const auto r = adaptive_outer(integrand, mesh.node(i - 1), mesh.node(i + 1), cfg, breaks);
        return 2.0 * half_c * r.value;
    }

    EntryIntegrand integrand(mesh, spec, cfg, i, j);
    std::vector<double> breaks;
    add_breakpoints(breaks, mesh, i - 1, j + 1, i - 1, j + 1, lambda);
    const auto r = adaptive_outer(integrand, mesh.node(i - 1), mesh.node(j + 1), cfg, breaks);
    return half_c * r.value;
}

Eigen::MatrixXd assemble_stiffness(const Mesh1D& mesh, const KernelSpec& spec, const QuadConfig& cfg,
                                   const AssemblyOptions& options)
{
    cfg.validate();
    require_compatible(mesh, spec);
    const int n = mesh.num_free();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);

    const bool toeplitz = options.toeplitz_cache && is_uniform(mesh);

    // Upper-triangle pairs that can interact.
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < (toeplitz ? 1 : n); ++a) {
        const int i = mesh.free_node(a);
        for (int b = a; b < n; ++b) {
            const int j = mesh.free_node(b);
            if (j >= i + 2 && mesh.node(j - 1) - mesh.node(i + 1) >= spec.lambda()) {
                break;
            }
            pairs.emplace_back(a, b);
        }
    }

    std::exception_ptr failure;
    const auto count = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long t = 0; t < count; ++t) {
        const auto [a, b] = pairs[static_cast<std::size_t>(t)];
        try {
            A(a, b) = stiffness_entry(mesh, spec, cfg, mesh.free_node(a), mesh.free_node(b));
        } catch (const std::exception& ex) {
#pragma omp critical(nonlocal_assembly_failure)
            {
                if (!failure) {
                    failure = std::make_exception_ptr(
                        AssemblyError("stiffness entry (" + std::to_string(a) + ", " + std::to_string(b)
                                          + ") failed: " + ex.what(),
                                      a, b));
                }
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    if (toeplitz) {
        for (int a = 1; a < n; ++a) {
            for (int b = a; b < n; ++b) {
                A(a, b) = A(0, b - a);
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            A(b, a) = A(a, b);
        }
    }
    return A;
}

Eigen::VectorXd assemble_load(const Mesh1D& mesh, const SourceFunction& f, const QuadConfig& cfg)
{
    cfg.validate();
    const int n = mesh.num_free();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (int d = 0; d < n; ++d) {
        const int k = mesh.free_node(d);
        const LocalHat hat{mesh, k};
        double sum = 0.0;
        for (int e : {k - 1, k}) {
            sum += gauss_legendre([&](double x) { return f(x) * hat.on_element(e, x); }, mesh.node(e),
                                  mesh.node(e + 1), kLoadPoints);
        }
        b(d) = sum;
    }
    return b;
}

NonlocalSystem assemble_system(std::shared_ptr<const Mesh1D> mesh, const KernelSpec& spec, const SourceFunction& f,
                               const QuadConfig& cfg, const AssemblyOptions& options)
{
    NonlocalSystem system{assemble_stiffness(*mesh, spec, cfg, options), assemble_load(*mesh, f, cfg), mesh, spec};
    return system;
}

CholeskySolver::CholeskySolver(const Eigen::MatrixXd& A) : llt_(A)
{
    if (llt_.info() != Eigen::Success) {
        const int k = first_nonpositive_minor(A);
        throw SolverError("Cholesky factorization failed: leading minor " + std::to_string(k)
                              + " is not positive definite",
                          k);
    }
}

Eigen::VectorXd CholeskySolver::solve(const Eigen::VectorXd& b) const
{
    return llt_.solve(b);
}

FEFunction solve(const NonlocalSystem& system)
{
    if (system.b.isZero(0.0)) {
        return FEFunction::zero(system.mesh);
    }
    const CholeskySolver solver(system.A);
    const Eigen::VectorXd u = solver.solve(system.b);
    return FEFunction::from_free_dofs(system.mesh, std::span<const double>(u.data(), static_cast<std::size_t>(u.size())));
}

double bilinear_apply(const NonlocalSystem& system, const FEFunction& v, const FEFunction& w)
{
    for (const FEFunction* f : {&v, &w}) {
        if (f->mesh_ptr() != system.mesh
            && (f->mesh().num_nodes() != system.mesh->num_nodes()
                || !std::equal(f->mesh().nodes().begin(), f->mesh().nodes().end(), system.mesh->nodes().begin()))) {
            throw MeshMismatchError("bilinear_apply: function does not live on the system mesh");
        }
    }
    const auto fv = v.free_dofs();
    const auto fw = w.free_dofs();
    const Eigen::Map<const Eigen::VectorXd> ev(fv.data(), static_cast<Eigen::Index>(fv.size()));
    const Eigen::Map<const Eigen::VectorXd> ew(fw.data(), static_cast<Eigen::Index>(fw.size()));
    return ev.dot(system.A * ew);
}

double delta_A(const std::shared_ptr<const Mesh1D>& mesh_coarse, const std::shared_ptr<const Mesh1D>& mesh_ref,
               const KernelSpec& spec, const QuadConfig& cfg, const SourceFunction& f)
{
    if (!mesh_coarse->same_interior_grid(*mesh_ref)) {
        throw MeshMismatchError("delta_A: meshes must share the interior grid");
    }
    const FEFunction coarse = solve(assemble_system(mesh_coarse, spec, f, cfg));
    const FEFunction ref = solve(assemble_system(mesh_ref, spec, f, cfg));
    return interior_l2_distance(coarse, ref);
}

void write_matrix_csv(const Eigen::MatrixXd& A, std::ostream& out)
{
    out << std::setprecision(17);
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
        for (Eigen::Index c = 0; c < A.cols(); ++c) {
            if (c > 0) {
                out << ',';
            }
            out << A(r, c);
        }
        out << '\n';
    }
}

} // namespace nonlocal
