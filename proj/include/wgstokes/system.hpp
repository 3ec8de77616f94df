#ifndef WGSTOKES_SYSTEM_HPP
#define WGSTOKES_SYSTEM_HPP

#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wgstokes/polynomial.hpp"
#include "wgstokes/weak_operators.hpp"

namespace wgs {

/// Global numbering: element interior velocity blocks, then interior-edge
/// velocity blocks, then pressure blocks, then one Lagrange multiplier for the
/// pressure mean. Boundary edges carry no unknowns (Dirichlet elimination).
struct DofMap {
    int k = 0;
    int n_int_scalar = 0;  // dim P_k
    int n_edge_scalar = 0; // k+2
    std::vector<int> elem_vel_offset;
    std::vector<int> edge_vel_offset; // -1 on boundary edges
    std::vector<int> elem_p_offset;
    int multiplier = -1;
    int n_velocity = 0;
    int n_pressure = 0;
    int n_total = 0;

    int elem_vel_dofs() const { return 2 * n_int_scalar; }
    int edge_vel_dofs() const { return 2 * n_edge_scalar; }
};

DofMap build_dofmap(const PolyMesh& mesh, int k);

/// A velocity field in V_h with no boundary elimination: per-element interior
/// coefficients and per-edge coefficients (all edges).
struct VelocityField {
    Eigen::VectorXd interior; // n_elements * 2*dimP_k
    Eigen::VectorXd edge;     // n_edges * 2*(k+2)
};

/// Local DOF vector of one element, gathered in the ElementBasis layout.
Eigen::VectorXd gather_local(const Discretization& d, int element, const VelocityField& v);

/// Symmetric indefinite saddle system [[A, -B^T, 0], [-B, 0, m], [0, m^T, 0]]
/// with rhs [F; B_b g; 0]; g holds the eliminated Dirichlet edge values.
struct SaddleSystem {
    DofMap dofs;
    Eigen::SparseMatrix<double> M;
    Eigen::VectorXd rhs;
    Eigen::VectorXd boundary_values; // full edge-coefficient vector; nonzero only on boundary
};

/// `boundary_values` supplies the fixed edge coefficients on boundary edges
/// (zero vector for the homogeneous problem).
SaddleSystem assemble(const Discretization& d, const Polynomial& f1, const Polynomial& f2,
                      const Eigen::VectorXd& boundary_values);

struct Solution {
    VelocityField u;          // includes the boundary lift on boundary edges
    Eigen::VectorXd pressure; // n_elements * dimP_{k+1}
    double multiplier = 0.0;
    double residual = 0.0;
};

/// Direct sparse solve; throws if the relative algebraic residual exceeds `tol`
/// (absolute 1e-12 when the rhs vanishes).
Solution solve(const Discretization& d, const SaddleSystem& sys, double tol = 1e-10);

/// || B u_h || over all pressure test functions, accumulated element-wise.
double divergence_residual(const Discretization& d, const Solution& sol);

/// Numerical inf-sup constant by a dense generalized eigensolve restricted to
/// mean-zero pressures; guarded to small systems.
double infsup_constant(const PolyMesh& mesh, int k, int max_dofs = 3000);

/// Matrix Market coordinate dump of the system plus a plain-text rhs column.
void dump_system(const SaddleSystem& sys, const std::string& matrix_path,
                 const std::string& rhs_path);

} // namespace wgs

#endif
