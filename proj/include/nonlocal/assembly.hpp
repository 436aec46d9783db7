#pragma once

#include "nonlocal/kernel.hpp"
#include "nonlocal/mesh.hpp"
#include "nonlocal/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <memory>

namespace nonlocal {

using SourceFunction = std::function<double(double)>;

struct AssemblyOptions {
    /// On globally uniform meshes compute one stencil row and replicate it (Toeplitz
    /// structure). Falls back to direct assembly when the mesh is not uniform.
    bool toeplitz_cache = false;
};

/// Discrete nonlocal problem over the N - 1 free dofs of a mesh.
struct NonlocalSystem {
    Eigen::MatrixXd A;  ///< symmetric positive definite stiffness matrix (c/2 included)
    Eigen::VectorXd b;  ///< load vector
    std::shared_ptr<const Mesh1D> mesh;
    KernelSpec spec;
};

/// One stiffness entry a(phi_j, phi_i) for free nodes i, j (storage indices).
///
/// The double integral over the truncated interaction set is folded onto
/// x in supp(phi_i) U supp(phi_j): pairs with y outside that set contribute twice
/// phi_i(x) phi_j(x) times the kernel mass outside it, which is integrated exactly.
/// The outer x integral uses adaptive_outer; the inner y integral uses closed forms on
/// the element of x and graded Gauss on the other elements of the support union.
/// Constrained exterior nodes therefore never influence an entry.
double stiffness_entry(const Mesh1D& mesh, const KernelSpec& spec, const QuadConfig& cfg, int i, int j);

/// Dense (N-1) x (N-1) stiffness matrix. Only i <= j is integrated; the lower triangle
/// is mirrored, so the result is exactly symmetric. Entries whose supports are at
/// least lambda apart are zero without quadrature. Throws AssemblyError naming the
/// free-dof pair when an entry's quadrature fails.
Eigen::MatrixXd assemble_stiffness(const Mesh1D& mesh, const KernelSpec& spec, const QuadConfig& cfg,
                                   const AssemblyOptions& options = {});

/// b_i = integral over Omega of f phi_i, 4-point Gauss on each element.
Eigen::VectorXd assemble_load(const Mesh1D& mesh, const SourceFunction& f, const QuadConfig& cfg);

NonlocalSystem assemble_system(std::shared_ptr<const Mesh1D> mesh, const KernelSpec& spec, const SourceFunction& f,
                               const QuadConfig& cfg, const AssemblyOptions& options = {});

/// Cholesky factorization of an SPD stiffness matrix, reusable for several loads.
class CholeskySolver {
public:
    /// Throws SolverError carrying the first leading minor that is not positive.
    explicit CholeskySolver(const Eigen::MatrixXd& A);

    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Galerkin solution: free dofs A^{-1} b, zero on every constrained node.
FEFunction solve(const NonlocalSystem& system);

/// v^T A w over the free dofs. MeshMismatchError unless v, w live on the system mesh.
double bilinear_apply(const NonlocalSystem& system, const FEFunction& v, const FEFunction& w);

/// L2(Omega) distance between the solutions on two meshes that share the interior
/// grid and differ only in the exterior coarsening: the empirical coarsening error.
double delta_A(const std::shared_ptr<const Mesh1D>& mesh_coarse, const std::shared_ptr<const Mesh1D>& mesh_ref,
               const KernelSpec& spec, const QuadConfig& cfg, const SourceFunction& f);

/// Row-major CSV dump of a dense matrix at 17 significant digits.
void write_matrix_csv(const Eigen::MatrixXd& A, std::ostream& out);

} // namespace nonlocal
