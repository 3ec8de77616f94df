#ifndef WGSTOKES_WEAK_OPERATORS_HPP
#define WGSTOKES_WEAK_OPERATORS_HPP

#include <functional>

#include <Eigen/Dense>

#include "wgstokes/local_spaces.hpp"
#include "wgstokes/mesh.hpp"

namespace wgs {

/// Element-local discrete operators in the local velocity DOF layout of
/// ElementBasis. Weak gradients are stored as coefficients in the orthonormal
/// Lambda basis, so A = G^T G realizes the energy inner product directly.
struct LocalOperators {
    Eigen::MatrixXd G; // dim Lambda x n_vel: weak-gradient coefficients
    Eigen::MatrixXd D; // dim P_{k+1} x n_vel: weak-divergence coefficients
    Eigen::MatrixXd A; // n_vel x n_vel, G^T G
    Eigen::MatrixXd B; // dim P_{k+1} x n_vel, entries (div_w phi_j, w_i)_T
    Eigen::VectorXd pressure_moments; // integral of each pressure basis function over T
    Eigen::MatrixXd pressure_mass;    // P_{k+1} mass matrix on T
};

Eigen::MatrixXd weak_gradient(const PolyMesh& mesh, const SubTriangulation& sub,
                              const ElementBasis& eb, const LambdaBasis& lambda,
                              int quad_bump = 0);

/// Returns the right-hand-side moment matrix R with R(i,j) = (div_w phi_j, w_i)_T;
/// the weak divergence itself is D = M_p^{-1} R.
Eigen::MatrixXd weak_divergence_moments(const PolyMesh& mesh, const SubTriangulation& sub,
                                        const ElementBasis& eb, int quad_bump = 0);

LocalOperators local_matrices(const PolyMesh& mesh, const SubTriangulation& sub,
                              const ElementBasis& eb, const LambdaBasis& lambda,
                              int quad_bump = 0);

/// All per-element discrete structure for one mesh and order, built once and
/// shared by assembly, error evaluation, and diagnostics.
struct Discretization {
    const PolyMesh* mesh = nullptr;
    int k = 0;
    int quad_bump = 0;
    std::vector<SubTriangulation> subs;
    std::vector<ElementBasis> bases;
    std::vector<LambdaBasis> lambdas;
    std::vector<LocalOperators> ops;
};

Discretization discretize(const PolyMesh& mesh, int k, int quad_bump = 0);

/// Squared broken H1-type seminorm ||v||_{1,h}^2 contribution of one element:
/// ||grad v_0||_T^2 + h_T^{-1} ||v_0 - v_b||_{dT}^2. `v` is the local DOF vector.
double norm_1h_sq_local(const PolyMesh& mesh, const SubTriangulation& sub,
                        const ElementBasis& eb, const Eigen::VectorXd& v);

} // namespace wgs

#endif
