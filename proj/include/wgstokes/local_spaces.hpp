#ifndef WGSTOKES_LOCAL_SPACES_HPP
#define WGSTOKES_LOCAL_SPACES_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "wgstokes/mesh.hpp"
#include "wgstokes/polynomial.hpp"
#include "wgstokes/quadrature.hpp"

namespace wgs {

/// Values of the 2D scaled monomial basis up to `deg` at scaled point (xi, eta),
/// graded-lexicographic order. `out` is resized to dim P_deg.
void monomial_values(int deg, double xi, double eta, Eigen::VectorXd& out);

/// Coefficient matrix of d/dxi (axis 0) or d/deta (axis 1) on P_deg, expressed
/// in the same truncated basis (top-degree rows are zero).
Eigen::MatrixXd diff_matrix(int deg, int axis);

/// Per-element bases: vector-valued scaled monomials for the interior velocity
/// ([P_k]^2), scaled monomials for pressure (P_{k+1}), and per-edge 1D monomials
/// in the globally oriented arclength parameter s in [0,1] for the boundary
/// velocity ([P_{k+1}(e)]^2).
struct ElementBasis {
    struct EdgeFrame {
        Pt a, b;             // s = 0 at a, s = 1 at b; a is the lower vertex index
        double length = 0.0;
        double nx = 0.0, ny = 0.0; // outward unit normal of the element
        int edge_id = -1;
    };

    int element = -1;
    int k = 0;
    AffineMap map; // scaled local frame: centroid x_T, scale h_T

    int n_scalar_interior = 0; // dim P_k
    int n_scalar_edge = 0;     // dim P_{k+1}(e) = k+2
    int n_pressure = 0;        // dim P_{k+1}

    std::vector<EdgeFrame> edges;

    // local velocity DOF layout: interior comp-major (comp*dimPk + mono), then
    // per local edge comp-major (comp*(k+2) + mono)
    int n_interior_dofs() const { return 2 * n_scalar_interior; }
    int n_edge_dofs() const { return 2 * n_scalar_edge; }
    int n_velocity_dofs() const
    {
        return n_interior_dofs() + static_cast<int>(edges.size()) * n_edge_dofs();
    }
};

ElementBasis build_element_basis(const PolyMesh& mesh, int element, int k);

/// Orthonormal basis of the constrained space Lambda_k(T): 2x2-matrix-valued,
/// piecewise [P_{k+1}]^{2x2} on the sub-triangulation, row-wise normal-trace
/// continuous across interior sub-edges, with row-wise divergence equal to a
/// single [P_k(T)]^2 polynomial. Coefficients are per sub-triangle over the
/// element-scaled monomials; column layout comp*m1 + mono, comp = (0,0), (0,1),
/// (1,0), (1,1) row-major, m1 = dim P_{k+1}.
struct LambdaBasis {
    int element = -1;
    int k = 0;
    int n_tri = 0;
    int dim = 0;
    int m1 = 0;
    std::vector<Eigen::MatrixXd> coeffs; // n_tri entries of shape dim x 4*m1

    /// constraint-matrix singular values, kept for diagnostics
    Eigen::VectorXd singular_values;
};

LambdaBasis build_lambda_basis(const PolyMesh& mesh, const SubTriangulation& sub, int element,
                               int k, int quad_bump = 0);

/// Evaluate basis member i at a physical point inside sub-triangle `tri`;
/// returns the 2x2 matrix as {m00, m01, m10, m11}.
std::array<double, 4> eval_lambda(const LambdaBasis& basis, const ElementBasis& eb, int tri,
                                  int i, double x, double y);

/// L2(T)-orthogonal projection of a piecewise matrix field onto span(basis).
/// `tau(tri, x, y)` returns the 2x2 value row-major at a physical point;
/// `exact_degree` bounds its piecewise polynomial degree.
Eigen::VectorXd project_onto_lambda(
    const LambdaBasis& basis, const ElementBasis& eb, const SubTriangulation& sub,
    const std::function<std::array<double, 4>(int, double, double)>& tau, int exact_degree);

} // namespace wgs

#endif
