#include "wgstokes/local_spaces.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace wgs {

void monomial_values(int deg, double xi, double eta, Eigen::VectorXd& out)
{
    const int m = poly_space_dim(2, deg);
    out.resize(m);
    out[0] = 1.0;
    for (int d = 1; d <= deg; ++d) {
        const int base = d * (d + 1) / 2;
        const int prev = (d - 1) * d / 2;
        // x^(d-b) y^b = x * x^(d-1-b) y^b for b < d, and y * y^(d-1) for b = d
        for (int b = 0; b < d; ++b) out[base + b] = xi * out[prev + b];
        out[base + d] = eta * out[prev + d - 1];
    }
}

Eigen::MatrixXd diff_matrix(int deg, int axis)
{
    const int m = poly_space_dim(2, deg);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
    for (int d = 1; d <= deg; ++d)
        for (int b = 0; b <= d; ++b) {
            const int a = d - b;
            const int col = monomial_index(a, b);
            if (axis == 0 && a > 0) D(monomial_index(a - 1, b), col) = a;
            if (axis == 1 && b > 0) D(monomial_index(a, b - 1), col) = b;
        }
    return D;
}

ElementBasis build_element_basis(const PolyMesh& mesh, int element, int k)
{
    if (element < 0 || element >= mesh.n_elements())
        throw std::invalid_argument("build_element_basis: element out of range");
    ElementBasis eb;
    eb.element = element;
    eb.k = k;
    eb.map = {mesh.centroid[element].x, mesh.centroid[element].y, mesh.diameter[element]};
    eb.n_scalar_interior = poly_space_dim(2, k);
    eb.n_scalar_edge = k + 2;
    eb.n_pressure = poly_space_dim(2, k + 1);

    const auto& cycle = mesh.elements[element];
    const int nloc = static_cast<int>(cycle.size());
    for (int i = 0; i < nloc; ++i) {
        const int va = cycle[i];
        const int vb = cycle[(i + 1) % nloc];
        ElementBasis::EdgeFrame fr;
        fr.edge_id = mesh.element_edges[element][i];
        // global orientation: lower vertex index -> higher
        const int lo = std::min(va, vb), hi = std::max(va, vb);
        fr.a = mesh.vertices[lo];
        fr.b = mesh.vertices[hi];
        fr.length = std::hypot(fr.b.x - fr.a.x, fr.b.y - fr.a.y);
        // outward normal follows the CCW cycle direction va -> vb
        const double dx = mesh.vertices[vb].x - mesh.vertices[va].x;
        const double dy = mesh.vertices[vb].y - mesh.vertices[va].y;
        const double len = std::hypot(dx, dy);
        fr.nx = dy / len;
        fr.ny = -dx / len;
        eb.edges.push_back(fr);
    }
    return eb;
}

LambdaBasis build_lambda_basis(const PolyMesh& mesh, const SubTriangulation& sub, int element,
                               int k, int quad_bump)
{
    LambdaBasis lb;
    lb.element = element;
    lb.k = k;
    lb.n_tri = sub.n_tri();
    lb.m1 = poly_space_dim(2, k + 1);

    const AffineMap map{mesh.centroid[element].x, mesh.centroid[element].y,
                        mesh.diameter[element]};
    const double inv_h = 1.0 / map.scale;
    const int m1 = lb.m1;
    const int mk = poly_space_dim(2, k);
    const int n_tri = lb.n_tri;
    const int n_psi = 4 * n_tri * m1;
    const int n_q = 2 * mk;
    const int n_unknowns = n_psi + n_q;
    auto psi_col = [m1](int tri, int comp, int mono) { return (tri * 4 + comp) * m1 + mono; };

    const int n_constraints =
        static_cast<int>(sub.interior.size()) * 2 * (k + 2) + n_tri * 2 * mk;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n_constraints, n_unknowns);
    int row = 0;

    // normal-jump moments on interior sub-edges, per matrix row, against P_{k+1}(e)
    const QuadRule erule = edge_rule(2 * (k + 2) + quad_bump);
    Eigen::VectorXd mono;
    for (const auto& se : sub.interior) {
        const QuadRule phys = map_to_segment(erule, se.a, se.b);
        for (int q = 0; q < phys.size(); ++q) {
            const double s = erule.points[q].x;
            const double w = phys.weights[q];
            const double xi = (phys.points[q].x - map.ox) * inv_h;
            const double eta = (phys.points[q].y - map.oy) * inv_h;
            monomial_values(k + 1, xi, eta, mono);
            double spow = 1.0;
            for (int j = 0; j <= k + 1; ++j) {
                for (int r = 0; r < 2; ++r) {
                    const int crow = row + 2 * j + r;
                    for (int mu = 0; mu < m1; ++mu) {
                        const double vx = w * spow * se.nx * mono[mu];
                        const double vy = w * spow * se.ny * mono[mu];
                        C(crow, psi_col(se.tri_left, 2 * r + 0, mu)) += vx;
                        C(crow, psi_col(se.tri_left, 2 * r + 1, mu)) += vy;
                        C(crow, psi_col(se.tri_right, 2 * r + 0, mu)) -= vx;
                        C(crow, psi_col(se.tri_right, 2 * r + 1, mu)) -= vy;
                    }
                }
                spow *= s;
            }
        }
        row += 2 * (k + 2);
    }

    // per sub-triangle, moments of (div psi_row - q_row) against P_k
    const QuadRule trule = triangle_rule(2 * (k + 2) + quad_bump);
    const Eigen::MatrixXd Dx = diff_matrix(k + 1, 0);
    const Eigen::MatrixXd Dy = diff_matrix(k + 1, 1);
    Eigen::VectorXd mk_vals, gx, gy;
    for (int t = 0; t < n_tri; ++t) {
        const QuadRule phys =
            map_to_triangle(trule, sub.triangles[t][0], sub.triangles[t][1], sub.triangles[t][2]);
        for (int q = 0; q < phys.size(); ++q) {
            const double w = phys.weights[q];
            const double xi = (phys.points[q].x - map.ox) * inv_h;
            const double eta = (phys.points[q].y - map.oy) * inv_h;
            monomial_values(k + 1, xi, eta, mono);
            monomial_values(k, xi, eta, mk_vals);
            gx = Dx.transpose() * mono; // values of d(monomial)/dxi at the point
            gy = Dy.transpose() * mono;
            for (int nu = 0; nu < mk; ++nu) {
                const double wv = w * mk_vals[nu];
                for (int r = 0; r < 2; ++r) {
                    const int crow = row + 2 * nu + r;
                    for (int mu = 0; mu < m1; ++mu) {
                        C(crow, psi_col(t, 2 * r + 0, mu)) += wv * inv_h * gx[mu];
                        C(crow, psi_col(t, 2 * r + 1, mu)) += wv * inv_h * gy[mu];
                    }
                    for (int mu = 0; mu < mk; ++mu)
                        C(crow, n_psi + r * mk + mu) -= wv * mk_vals[mu];
                }
            }
        }
        row += 2 * mk;
    }

    // row scaling keeps the rank decision insensitive to edge/area measures
    for (int i = 0; i < C.rows(); ++i) {
        const double nrm = C.row(i).norm();
        if (nrm > 0.0) C.row(i) /= nrm;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    lb.singular_values = sv;
    const double cutoff = 1e-10 * sv[0];
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 0.1 * cutoff && sv[i] <= 10.0 * cutoff)
            throw std::runtime_error(
                "build_lambda_basis: ambiguous rank decision on element " +
                std::to_string(element) + " (ill-conditioned geometry)");
    const int null_dim = n_unknowns - rank;
    if (null_dim <= 0)
        throw std::runtime_error("build_lambda_basis: empty nullspace on element " +
                                 std::to_string(element));
    // psi components of the nullspace; q is determined by psi and dropped
    const Eigen::MatrixXd V_psi = svd.matrixV().rightCols(null_dim).topRows(n_psi);

    // piecewise L2(T) Gram of the nullspace vectors
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(null_dim, null_dim);
    for (int t = 0; t < n_tri; ++t) {
        const QuadRule phys =
            map_to_triangle(trule, sub.triangles[t][0], sub.triangles[t][1], sub.triangles[t][2]);
        Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(m1, m1);
        for (int q = 0; q < phys.size(); ++q) {
            const double xi = (phys.points[q].x - map.ox) * inv_h;
            const double eta = (phys.points[q].y - map.oy) * inv_h;
            monomial_values(k + 1, xi, eta, mono);
            mass.noalias() += phys.weights[q] * mono * mono.transpose();
        }
        for (int c = 0; c < 4; ++c) {
            const Eigen::MatrixXd S = V_psi.middleRows((t * 4 + c) * m1, m1);
            gram.noalias() += S.transpose() * mass * S;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double emax = ev[null_dim - 1];
    int kept = 0;
    for (int i = 0; i < null_dim; ++i)
        if (ev[i] >= 1e-12 * emax) ++kept;
    // carry the auxiliary q part along so the basis can be re-projected onto
    // the constraint manifold after the 1/sqrt(lambda) scaling, which would
    // otherwise amplify nullspace roundoff by up to the Gram condition number
    const Eigen::MatrixXd V_null = svd.matrixV().rightCols(null_dim);
    Eigen::MatrixXd W_full(n_unknowns, kept);
    int c = 0;
    for (int i = 0; i < null_dim; ++i)
        if (ev[i] >= 1e-12 * emax)
            W_full.col(c++) = V_null * eig.eigenvectors().col(i) / std::sqrt(ev[i]);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(1e-10); // same rank decision as the SVD above
    cod.compute(C);
    W_full -= cod.solve(C * W_full);
    const Eigen::MatrixXd W = W_full.topRows(n_psi);

    lb.dim = kept;
    lb.coeffs.resize(n_tri);
    for (int t = 0; t < n_tri; ++t)
        lb.coeffs[t] = W.middleRows(t * 4 * m1, 4 * m1).transpose();
    return lb;
}

std::array<double, 4> eval_lambda(const LambdaBasis& basis, const ElementBasis& eb, int tri,
                                  int i, double x, double y)
{
    const double xi = (x - eb.map.ox) / eb.map.scale;
    const double eta = (y - eb.map.oy) / eb.map.scale;
    Eigen::VectorXd mono;
    monomial_values(basis.k + 1, xi, eta, mono);
    std::array<double, 4> out{};
    for (int c = 0; c < 4; ++c)
        out[c] = basis.coeffs[tri].row(i).segment(c * basis.m1, basis.m1).dot(mono);
    return out;
}

Eigen::VectorXd project_onto_lambda(
    const LambdaBasis& basis, const ElementBasis& eb, const SubTriangulation& sub,
    const std::function<std::array<double, 4>(int, double, double)>& tau, int exact_degree)
{
    const QuadRule trule = triangle_rule(exact_degree + basis.k + 1);
    const double inv_h = 1.0 / eb.map.scale;
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(basis.dim);
    Eigen::VectorXd mono;
    for (int t = 0; t < basis.n_tri; ++t) {
        const QuadRule phys =
            map_to_triangle(trule, sub.triangles[t][0], sub.triangles[t][1], sub.triangles[t][2]);
        for (int q = 0; q < phys.size(); ++q) {
            const double x = phys.points[q].x, y = phys.points[q].y;
            const double xi = (x - eb.map.ox) * inv_h;
            const double eta = (y - eb.map.oy) * inv_h;
            monomial_values(basis.k + 1, xi, eta, mono);
            const std::array<double, 4> tv = tau(t, x, y);
            Eigen::VectorXd vals = Eigen::VectorXd::Zero(basis.dim);
            for (int c = 0; c < 4; ++c)
                if (tv[c] != 0.0)
                    vals.noalias() +=
                        tv[c] * (basis.coeffs[t].middleCols(c * basis.m1, basis.m1) * mono);
            coeffs.noalias() += phys.weights[q] * vals;
        }
    }
    return coeffs;
}

} // namespace wgs
