#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace nonlocal {

/// Partition of [-1 - lambda, 1 + lambda]: N uniform elements of size h_hat = 2/N on
/// Omega = (-1, 1) and K geometrically coarsened elements per side in the interaction
/// domain.
///
/// Nodes are addressed by 0-based storage index k = 0 .. N + 2K, so node k sits at the
/// position x_{k-K} of the usual signed numbering. Nodes K and K + N are x = -1 and
/// x = 1; the free degrees of freedom are the N - 1 nodes strictly inside Omega.
class Mesh1D {
public:
    Mesh1D(std::vector<double> nodes, int N, int K, double p, double lambda);

    [[nodiscard]] int N() const noexcept { return N_; }
    [[nodiscard]] int K() const noexcept { return K_; }
    [[nodiscard]] double h_hat() const noexcept { return 2.0 / N_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }

    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] double node(int k) const { return nodes_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] int num_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] int num_elements() const noexcept { return num_nodes() - 1; }
    [[nodiscard]] double element_length(int e) const { return node(e + 1) - node(e); }

    [[nodiscard]] int left_boundary_node() const noexcept { return K_; }
    [[nodiscard]] int right_boundary_node() const noexcept { return K_ + N_; }

    [[nodiscard]] int num_free() const noexcept { return N_ - 1; }
    /// Storage index of free dof d (0 <= d < N - 1).
    [[nodiscard]] int free_node(int d) const noexcept { return K_ + 1 + d; }
    [[nodiscard]] bool is_free(int k) const noexcept { return k > K_ && k < K_ + N_; }

    /// Element e with x in [x_e, x_{e+1}]; the left element wins at interior nodes
    /// except at the left domain end. Throws DomainError outside the domain.
    [[nodiscard]] int element_containing(double x) const;

    /// Largest element length.
    [[nodiscard]] double h_max() const;

    /// True if both meshes have the same N and bitwise identical nodes on [-1, 1].
    [[nodiscard]] bool same_interior_grid(const Mesh1D& other) const;

    [[nodiscard]] double domain_left() const { return nodes_.front(); }
    [[nodiscard]] double domain_right() const { return nodes_.back(); }

private:
    std::vector<double> nodes_;
    int N_;
    int K_;
    double p_;
    double lambda_;
};

/// Uniform grid on Omega, exterior nodes generated outward by
/// x_i = x_{i-1} + h_hat ((x_{i-1} - xhat) / (x_N - xhat))^p (mirrored on the left);
/// the first node reaching 1 + lambda is snapped onto it.
Mesh1D build_mesh(int N, double lambda, double p);

/// Same as build_mesh, shared for use by FEFunction and NonlocalSystem.
std::shared_ptr<const Mesh1D> make_mesh(int N, double lambda, double p);

/// Piecewise-linear nodal basis function of node j (storage index) at x.
double hat_eval(const Mesh1D& mesh, int j, double x);

/// Dump of node coordinates: header "x", then one node per line at 17 significant digits.
void write_mesh_csv(const Mesh1D& mesh, std::ostream& out);

/// Nodal coefficient vector of a continuous piecewise-linear function on a mesh.
class FEFunction {
public:
    /// Identically zero function.
    static FEFunction zero(std::shared_ptr<const Mesh1D> mesh);
    /// Volume-constrained function from its N - 1 free-dof values.
    static FEFunction from_free_dofs(std::shared_ptr<const Mesh1D> mesh, std::span<const double> free);
    /// Arbitrary nodal values (not necessarily volume constrained).
    static FEFunction from_nodal_values(std::shared_ptr<const Mesh1D> mesh, std::vector<double> coeffs);

    [[nodiscard]] const Mesh1D& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] const std::shared_ptr<const Mesh1D>& mesh_ptr() const noexcept { return mesh_; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::vector<double> free_dofs() const;

    /// Zero at every node outside the open interval (-1, 1).
    [[nodiscard]] bool satisfies_volume_constraint() const;

    [[nodiscard]] double operator()(double x) const;

    /// The same volume-constrained function expressed on another mesh with an
    /// identical interior grid (only the exterior coarsening may differ).
    [[nodiscard]] FEFunction transfer_to(std::shared_ptr<const Mesh1D> mesh) const;

    [[nodiscard]] FEFunction scaled(double alpha) const;
    friend FEFunction operator-(const FEFunction& a, const FEFunction& b);
    friend FEFunction operator+(const FEFunction& a, const FEFunction& b);

private:
    FEFunction(std::shared_ptr<const Mesh1D> mesh, std::vector<double> coeffs);

    std::shared_ptr<const Mesh1D> mesh_;
    std::vector<double> coeffs_;
};

/// Value of the hat expansion at x; DomainError outside [-1 - lambda, 1 + lambda].
double fe_eval(const FEFunction& f, double x);

} // namespace nonlocal
