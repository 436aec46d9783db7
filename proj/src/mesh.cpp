#include "nonlocal/mesh.hpp"

#include "nonlocal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nonlocal {

Mesh1D::Mesh1D(std::vector<double> nodes, int N, int K, double p, double lambda)
    : nodes_(std::move(nodes)), N_(N), K_(K), p_(p), lambda_(lambda)
{
    if (static_cast<int>(nodes_.size()) != N_ + 2 * K_ + 1) {
        throw std::invalid_argument("Mesh1D: node count does not match N + 2K + 1");
    }
    for (std::size_t k = 1; k < nodes_.size(); ++k) {
        if (!(nodes_[k] > nodes_[k - 1])) {
            throw std::invalid_argument("Mesh1D: nodes must be strictly increasing");
        }
    }
}

int Mesh1D::element_containing(double x) const
{
    if (!(x >= nodes_.front() && x <= nodes_.back())) {
        throw DomainError("point " + std::to_string(x) + " lies outside the computational domain");
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    int e = static_cast<int>(it - nodes_.begin()) - 1;
    if (e >= num_elements()) {
        e = num_elements() - 1;
    }
    // Prefer the left element at interior nodes.
    if (e > 0 && x == nodes_[static_cast<std::size_t>(e)]) {
        --e;
    }
    return e;
}

double Mesh1D::h_max() const
{
    double h = 0.0;
    for (int e = 0; e < num_elements(); ++e) {
        h = std::max(h, element_length(e));
    }
    return h;
}

bool Mesh1D::same_interior_grid(const Mesh1D& other) const
{
    if (N_ != other.N_) {
        return false;
    }
    for (int i = 0; i <= N_; ++i) {
        if (node(K_ + i) != other.node(other.K_ + i)) {
            return false;
        }
    }
    return true;
}

Mesh1D build_mesh(int N, double lambda, double p)
{
    if (N < 2) {
        throw DomainError("build_mesh requires N >= 2");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("build_mesh requires a positive finite lambda");
    }
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw DomainError("build_mesh requires a finite p >= 0");
    }

    const double h = 2.0 / N;
    const double x0 = -1.0;
    const double xN = 1.0;
    const double xhat = 0.5 * (x0 + xN);
    const double right_end = 1.0 + lambda;
    const double snap_tol = 1e-9 * h;
    constexpr std::size_t max_exterior = 50'000'000;

    std::vector<double> right;
    double x = xN;
    while (true) {
        x = x + h * std::pow((x - xhat) / (xN - xhat), p);
        if (x >= right_end - snap_tol) {
            right.push_back(right_end);
            break;
        }
        right.push_back(x);
        if (right.size() > max_exterior) {
            throw DomainError("build_mesh: exterior grid too large");
        }
    }
    const int K = static_cast<int>(right.size());

    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(N + 2 * K + 1));
    for (int k = K - 1; k >= 0; --k) {
        nodes.push_back(-right[static_cast<std::size_t>(k)]);
    }
    nodes.push_back(x0);
    for (int i = 1; i < N; ++i) {
        nodes.push_back(-1.0 + i * h);
    }
    nodes.push_back(xN);
    nodes.insert(nodes.end(), right.begin(), right.end());
    return Mesh1D(std::move(nodes), N, K, p, lambda);
}

std::shared_ptr<const Mesh1D> make_mesh(int N, double lambda, double p)
{
    return std::make_shared<const Mesh1D>(build_mesh(N, lambda, p));
}

double hat_eval(const Mesh1D& mesh, int j, double x)
{
    if (j < 0 || j >= mesh.num_nodes()) {
        throw std::out_of_range("hat_eval: node index " + std::to_string(j) + " out of range");
    }
    const double xj = mesh.node(j);
    if (x == xj) {
        return 1.0;
    }
    if (x < xj) {
        if (j == 0) {
            return 0.0;
        }
        const double xl = mesh.node(j - 1);
        return x > xl ? (x - xl) / (xj - xl) : 0.0;
    }
    if (j == mesh.num_nodes() - 1) {
        return 0.0;
    }
    const double xr = mesh.node(j + 1);
    return x < xr ? (xr - x) / (xr - xj) : 0.0;
}

void write_mesh_csv(const Mesh1D& mesh, std::ostream& out)
{
    out << "x\n" << std::setprecision(17);
    for (double x : mesh.nodes()) {
        out << x << '\n';
    }
}

FEFunction::FEFunction(std::shared_ptr<const Mesh1D> mesh, std::vector<double> coeffs)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs))
{
    if (!mesh_) {
        throw std::invalid_argument("FEFunction: null mesh");
    }
    if (static_cast<int>(coeffs_.size()) != mesh_->num_nodes()) {
        throw std::invalid_argument("FEFunction: coefficient count does not match the mesh");
    }
}

FEFunction FEFunction::zero(std::shared_ptr<const Mesh1D> mesh)
{
    const auto n = static_cast<std::size_t>(mesh->num_nodes());
    return FEFunction(std::move(mesh), std::vector<double>(n, 0.0));
}

FEFunction FEFunction::from_free_dofs(std::shared_ptr<const Mesh1D> mesh, std::span<const double> free)
{
    if (static_cast<int>(free.size()) != mesh->num_free()) {
        throw std::invalid_argument("FEFunction: free-dof vector has the wrong length");
    }
    std::vector<double> coeffs(static_cast<std::size_t>(mesh->num_nodes()), 0.0);
    std::copy(free.begin(), free.end(), coeffs.begin() + mesh->free_node(0));
    return FEFunction(std::move(mesh), std::move(coeffs));
}

FEFunction FEFunction::from_nodal_values(std::shared_ptr<const Mesh1D> mesh, std::vector<double> coeffs)
{
    return FEFunction(std::move(mesh), std::move(coeffs));
}

std::vector<double> FEFunction::free_dofs() const
{
    const auto first = coeffs_.begin() + mesh_->free_node(0);
    return {first, first + mesh_->num_free()};
}

bool FEFunction::satisfies_volume_constraint() const
{
    for (int k = 0; k < mesh_->num_nodes(); ++k) {
        if (!mesh_->is_free(k) && coeffs_[static_cast<std::size_t>(k)] != 0.0) {
            return false;
        }
    }
    return true;
}

double FEFunction::operator()(double x) const
{
    const int e = mesh_->element_containing(x);
    const double xl = mesh_->node(e);
    const double xr = mesh_->node(e + 1);
    const double t = (x - xl) / (xr - xl);
    const auto ue = static_cast<std::size_t>(e);
    return (1.0 - t) * coeffs_[ue] + t * coeffs_[ue + 1];
}

FEFunction FEFunction::transfer_to(std::shared_ptr<const Mesh1D> mesh) const
{
    if (!mesh_->same_interior_grid(*mesh)) {
        throw MeshMismatchError("transfer_to: interior grids differ");
    }
    if (!satisfies_volume_constraint()) {
        throw MeshMismatchError("transfer_to: function is not volume constrained");
    }
    const auto free = free_dofs();
    return from_free_dofs(std::move(mesh), free);
}

FEFunction FEFunction::scaled(double alpha) const
{
    std::vector<double> c(coeffs_);
    for (double& v : c) {
        v *= alpha;
    }
    return FEFunction(mesh_, std::move(c));
}

namespace {

void require_same_mesh(const FEFunction& a, const FEFunction& b)
{
    if (a.mesh_ptr() != b.mesh_ptr()
        && (a.mesh().num_nodes() != b.mesh().num_nodes()
            || !std::equal(a.mesh().nodes().begin(), a.mesh().nodes().end(), b.mesh().nodes().begin()))) {
        throw MeshMismatchError("FE functions live on different meshes");
    }
}

} // namespace

FEFunction operator-(const FEFunction& a, const FEFunction& b)
{
    require_same_mesh(a, b);
    std::vector<double> c(a.coeffs_);
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] -= b.coeffs_[k];
    }
    return FEFunction(a.mesh_, std::move(c));
}

FEFunction operator+(const FEFunction& a, const FEFunction& b)
{
    require_same_mesh(a, b);
    std::vector<double> c(a.coeffs_);
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] += b.coeffs_[k];
    }
    return FEFunction(a.mesh_, std::move(c));
}

double fe_eval(const FEFunction& f, double x)
{
    return f(x);
}

} // namespace nonlocal
