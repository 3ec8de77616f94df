#include "wgstokes/weak_operators.hpp"

#include <cmath>

namespace wgs {

namespace {

struct Frame {
    double ox, oy, inv_h;
};

inline void scaled_point(const Frame& fr, const Pt& p, double& xi, double& eta)
{
    xi = (p.x - fr.ox) * fr.inv_h;
    eta = (p.y - fr.oy) * fr.inv_h;
}

} // namespace

Eigen::MatrixXd weak_gradient(const PolyMesh& mesh, const SubTriangulation& sub,
                              const ElementBasis& eb, const LambdaBasis& lambda, int quad_bump)
{
    const int k = eb.k;
    const int m1 = lambda.m1;
    const int mk = eb.n_scalar_interior;
    const int n_vel = eb.n_velocity_dofs();
    const Frame fr{eb.map.ox, eb.map.oy, 1.0 / eb.map.scale};

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(lambda.dim, n_vel);
    const Eigen::MatrixXd Dx = diff_matrix(k + 1, 0);
    const Eigen::MatrixXd Dy = diff_matrix(k + 1, 1);

    // -(v_0, div tau)_T over the sub-triangulation
    const QuadRule trule = triangle_rule(2 * (k + 2) + quad_bump);
    Eigen::VectorXd mono, mkv, gx, gy;
    for (int t = 0; t < sub.n_tri(); ++t) {
        const QuadRule phys =
            map_to_triangle(trule, sub.triangles[t][0], sub.triangles[t][1], sub.triangles[t][2]);
        for (int q = 0; q < phys.size(); ++q) {
            double xi, eta;
            scaled_point(fr, phys.points[q], xi, eta);
            monomial_values(k + 1, xi, eta, mono);
            monomial_values(k, xi, eta, mkv);
            gx = Dx.transpose() * mono;
            gy = Dy.transpose() * mono;
            const double w = phys.weights[q];
            for (int r = 0; r < 2; ++r) {
                const Eigen::VectorXd div_r =
                    fr.inv_h * (lambda.coeffs[t].middleCols((2 * r) * m1, m1) * gx +
                                lambda.coeffs[t].middleCols((2 * r + 1) * m1, m1) * gy);
                for (int mu = 0; mu < mk; ++mu)
                    G.col(r * mk + mu).noalias() -= (w * mkv[mu]) * div_r;
            }
        }
    }

    // <v_b, tau . n>_{dT}, one parent edge per sub-triangle
    const QuadRule erule = edge_rule(2 * (k + 2) + quad_bump);
    const int n_int = eb.n_interior_dofs();
    const int ne_sc = eb.n_scalar_edge;
    for (std::size_t e = 0; e < eb.edges.size(); ++e) {
        const auto& ef = eb.edges[e];
        const int t = sub.parent_edge_tri[e];
        const QuadRule phys = map_to_segment(erule, ef.a, ef.b);
        for (int q = 0; q < phys.size(); ++q) {
            const double s = erule.points[q].x;
            const double w = phys.weights[q];
            double xi, eta;
            scaled_point(fr, phys.points[q], xi, eta);
            monomial_values(k + 1, xi, eta, mono);
            for (int r = 0; r < 2; ++r) {
                const Eigen::VectorXd tn_r =
                    ef.nx * (lambda.coeffs[t].middleCols((2 * r) * m1, m1) * mono) +
                    ef.ny * (lambda.coeffs[t].middleCols((2 * r + 1) * m1, m1) * mono);
                double spow = 1.0;
                for (int j = 0; j < ne_sc; ++j) {
                    const int col = n_int + static_cast<int>(e) * 2 * ne_sc + r * ne_sc + j;
                    G.col(col).noalias() += (w * spow) * tn_r;
                    spow *= s;
                }
            }
        }
    }
    return G;
}

Eigen::MatrixXd weak_divergence_moments(const PolyMesh& mesh, const SubTriangulation& sub,
                                        const ElementBasis& eb, int quad_bump)
{
    const int k = eb.k;
    const int m1 = eb.n_pressure;
    const int mk = eb.n_scalar_interior;
    const Frame fr{eb.map.ox, eb.map.oy, 1.0 / eb.map.scale};
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m1, eb.n_velocity_dofs());
    const Eigen::MatrixXd Dx = diff_matrix(k + 1, 0);
    const Eigen::MatrixXd Dy = diff_matrix(k + 1, 1);

    // -(v_0, grad w)_T
    const QuadRule trule = triangle_rule(2 * (k + 2) + quad_bump);
    Eigen::VectorXd mono, mkv, gx, gy;
    for (int t = 0; t < sub.n_tri(); ++t) {
        const QuadRule phys =
            map_to_triangle(trule, sub.triangles[t][0], sub.triangles[t][1], sub.triangles[t][2]);
        for (int q = 0; q < phys.size(); ++q) {
            double xi, eta;
            scaled_point(fr, phys.points[q], xi, eta);
            monomial_values(k + 1, xi, eta, mono);
            monomial_values(k, xi, eta, mkv);
            gx = fr.inv_h * (Dx.transpose() * mono);
            gy = fr.inv_h * (Dy.transpose() * mono);
            const double w = phys.weights[q];
            for (int mu = 0; mu < mk; ++mu) {
                R.col(0 * mk + mu).noalias() -= (w * mkv[mu]) * gx;
                R.col(1 * mk + mu).noalias() -= (w * mkv[mu]) * gy;
            }
        }
    }

    // <v_b . n, w>_{dT}
    const QuadRule erule = edge_rule(2 * (k + 2) + quad_bump);
    const int n_int = eb.n_interior_dofs();
    const int ne_sc = eb.n_scalar_edge;
    for (std::size_t e = 0; e < eb.edges.size(); ++e) {
        const auto& ef = eb.edges[e];
        const QuadRule phys = map_to_segment(erule, ef.a, ef.b);
        for (int q = 0; q < phys.size(); ++q) {
            const double s = erule.points[q].x;
            const double w = phys.weights[q];
            double xi, eta;
            scaled_point(fr, phys.points[q], xi, eta);
            monomial_values(k + 1, xi, eta, mono);
            for (int r = 0; r < 2; ++r) {
                const double nr = (r == 0) ? ef.nx : ef.ny;
                double spow = 1.0;
                for (int j = 0; j < ne_sc; ++j) {
                    const int col = n_int + static_cast<int>(e) * 2 * ne_sc + r * ne_sc + j;
                    R.col(col).noalias() += (w * spow * nr) * mono;
                    spow *= s;
                }
            }
        }
    }
    return R;
}

LocalOperators local_matrices(const PolyMesh& mesh, const SubTriangulation& sub,
                              const ElementBasis& eb, const LambdaBasis& lambda, int quad_bump)
{
    LocalOperators ops;
    ops.G = weak_gradient(mesh, sub, eb, lambda, quad_bump);
    ops.B = weak_divergence_moments(mesh, sub, eb, quad_bump);
    ops.A = ops.G.transpose() * ops.G;
    ops.A = 0.5 * (ops.A + ops.A.transpose()).eval(); // exact symmetry at roundoff

    const int k = eb.k;
    const Frame fr{eb.map.ox, eb.map.oy, 1.0 / eb.map.scale};
    const QuadRule trule = triangle_rule(2 * (k + 2) + quad_bump);
    ops.pressure_mass = Eigen::MatrixXd::Zero(eb.n_pressure, eb.n_pressure);
    ops.pressure_moments = Eigen::VectorXd::Zero(eb.n_pressure);
    Eigen::VectorXd mono;
    for (int t = 0; t < sub.n_tri(); ++t) {
        const QuadRule phys =
            map_to_triangle(trule, sub.triangles[t][0], sub.triangles[t][1], sub.triangles[t][2]);
        for (int q = 0; q < phys.size(); ++q) {
            double xi, eta;
            scaled_point(fr, phys.points[q], xi, eta);
            monomial_values(k + 1, xi, eta, mono);
            ops.pressure_mass.noalias() += phys.weights[q] * mono * mono.transpose();
            ops.pressure_moments.noalias() += phys.weights[q] * mono;
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(ops.pressure_mass);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("local_matrices: pressure mass factorization failed on element " +
                                 std::to_string(eb.element));
    ops.D = ldlt.solve(ops.B);
    return ops;
}

Discretization discretize(const PolyMesh& mesh, int k, int quad_bump)
{
    Discretization d;
    d.mesh = &mesh;
    d.k = k;
    d.quad_bump = quad_bump;
    d.subs.reserve(mesh.n_elements());
    d.bases.reserve(mesh.n_elements());
    d.lambdas.reserve(mesh.n_elements());
    d.ops.reserve(mesh.n_elements());
    for (int e = 0; e < mesh.n_elements(); ++e) {
        d.subs.push_back(subtriangulate(mesh, e));
        d.bases.push_back(build_element_basis(mesh, e, k));
        d.lambdas.push_back(build_lambda_basis(mesh, d.subs[e], e, k, quad_bump));
        d.ops.push_back(local_matrices(mesh, d.subs[e], d.bases[e], d.lambdas[e], quad_bump));
    }
    return d;
}

double norm_1h_sq_local(const PolyMesh& mesh, const SubTriangulation& sub,
                        const ElementBasis& eb, const Eigen::VectorXd& v)
{
    const int k = eb.k;
    const int mk = eb.n_scalar_interior;
    const Frame fr{eb.map.ox, eb.map.oy, 1.0 / eb.map.scale};
    const Eigen::MatrixXd Dx = diff_matrix(k, 0);
    const Eigen::MatrixXd Dy = diff_matrix(k, 1);
    double acc = 0.0;

    const QuadRule trule = triangle_rule(std::max(0, 2 * k));
    Eigen::VectorXd mkv;
    for (int t = 0; t < sub.n_tri(); ++t) {
        const QuadRule phys =
            map_to_triangle(trule, sub.triangles[t][0], sub.triangles[t][1], sub.triangles[t][2]);
        for (int q = 0; q < phys.size(); ++q) {
            double xi, eta;
            scaled_point(fr, phys.points[q], xi, eta);
            monomial_values(k, xi, eta, mkv);
            const Eigen::VectorXd gx = fr.inv_h * (Dx.transpose() * mkv);
            const Eigen::VectorXd gy = fr.inv_h * (Dy.transpose() * mkv);
            for (int r = 0; r < 2; ++r) {
                const auto cr = v.segment(r * mk, mk);
                const double dxv = gx.dot(cr);
                const double dyv = gy.dot(cr);
                acc += phys.weights[q] * (dxv * dxv + dyv * dyv);
            }
        }
    }

    const QuadRule erule = edge_rule(2 * (k + 2));
    const int n_int = eb.n_interior_dofs();
    const int ne_sc = eb.n_scalar_edge;
    const double inv_hT = 1.0 / eb.map.scale;
    for (std::size_t e = 0; e < eb.edges.size(); ++e) {
        const auto& ef = eb.edges[e];
        const QuadRule phys = map_to_segment(erule, ef.a, ef.b);
        for (int q = 0; q < phys.size(); ++q) {
            const double s = erule.points[q].x;
            double xi, eta;
            scaled_point(fr, phys.points[q], xi, eta);
            monomial_values(k, xi, eta, mkv);
            for (int r = 0; r < 2; ++r) {
                double v0 = mkv.dot(v.segment(r * mk, mk));
                double vb = 0.0;
                double spow = 1.0;
                for (int j = 0; j < ne_sc; ++j) {
                    vb += spow * v[n_int + static_cast<int>(e) * 2 * ne_sc + r * ne_sc + j];
                    spow *= s;
                }
                acc += phys.weights[q] * inv_hT * (v0 - vb) * (v0 - vb);
            }
        }
    }
    return acc;
}

} // namespace wgs
